// Execute one snippet file in a fresh interpreter under a wall-clock
// timeout. The result is a plain object so the CLI can emit it as the
// one JSON line consumers parse.

import { spawn } from 'node:child_process';
import { accessSync, constants as fsConstants } from 'node:fs';
import * as os from 'node:os';

export interface RunResult {
    exit_code: number;
    stdout: string;
    stderr: string;
    wall_seconds: number;
    timed_out: boolean;
    metadata: {
        platform: string;
        arch: string;
        release: string;
        interpreter: string;
    };
}

export interface ExecuteOptions {
    interpreter?: string;
    maxOutputBytes?: number;
}

export const DEFAULT_MAX_OUTPUT_BYTES = 1024 * 1024;
export const DEFAULT_INTERPRETER = 'python3';

/** Retains at most `cap` bytes; anything past the cap is dropped. */
class CappedBuffer {
    private readonly chunks: Buffer[] = [];
    private kept = 0;

    constructor(private readonly cap: number) {}

    push(chunk: Buffer): void {
        if (this.kept >= this.cap) {
            return;
        }
        const room = this.cap - this.kept;
        const take = chunk.length <= room ? chunk : chunk.subarray(0, room);
        this.chunks.push(take);
        this.kept += take.length;
    }

    text(): string {
        return Buffer.concat(this.chunks).toString('utf8');
    }
}

function killGroup(pid: number): void {
    // The child was spawned detached, making it a process group leader, so
    // the negative-pid form reaches every descendant still in the group.
    // SIGKILL cannot be caught or ignored.
    try {
        process.kill(-pid, 'SIGKILL');
    } catch {
        try {
            process.kill(pid, 'SIGKILL');
        } catch {
            // Already gone.
        }
    }
}

function forcedExitCode(signal: NodeJS.Signals): number {
    // Shell convention for signal deaths: 128 plus the signal number.
    const num = os.constants.signals[signal];
    return 128 + (num ?? os.constants.signals.SIGKILL);
}

export function execute(
    file: string,
    timeoutSeconds: number,
    options: ExecuteOptions = {},
): Promise<RunResult> {
    const interpreter = options.interpreter ?? DEFAULT_INTERPRETER;
    const cap = options.maxOutputBytes ?? DEFAULT_MAX_OUTPUT_BYTES;
    if (!Number.isFinite(timeoutSeconds) || timeoutSeconds <= 0) {
        throw new RangeError('timeout must be a positive number of seconds');
    }
    if (!Number.isInteger(cap) || cap <= 0) {
        throw new RangeError('output byte cap must be a positive integer');
    }
    // An unreadable snippet is a runner-level failure, not a nonzero run
    // result; the interpreter never gets to see the file.
    accessSync(file, fsConstants.R_OK);

    return new Promise((resolve, reject) => {
        const started = process.hrtime.bigint();
        const child = spawn(interpreter, [file], {
            detached: true,
            stdio: ['ignore', 'pipe', 'pipe'],
        });
        const stdout = new CappedBuffer(cap);
        const stderr = new CappedBuffer(cap);
        let timedOut = false;
        let settled = false;

        const timer = setTimeout(() => {
            // Count the run as timed out only if the interpreter itself is
            // still alive. Either way the whole group gets killed: an exited
            // parent can leave descendants holding the output pipes open,
            // which would otherwise stall the close event indefinitely.
            timedOut = child.exitCode === null && child.signalCode === null;
            if (child.pid !== undefined) {
                killGroup(child.pid);
            }
        }, timeoutSeconds * 1000);

        child.stdout?.on('data', (chunk: Buffer) => stdout.push(chunk));
        child.stderr?.on('data', (chunk: Buffer) => stderr.push(chunk));

        child.once('error', (err) => {
            clearTimeout(timer);
            if (!settled) {
                settled = true;
                reject(err);
            }
        });

        child.once('close', (code, signal) => {
            clearTimeout(timer);
            if (settled) {
                return;
            }
            settled = true;
            const wall = Number(process.hrtime.bigint() - started) / 1e9;
            resolve({
                exit_code: code ?? forcedExitCode(signal ?? 'SIGKILL'),
                stdout: stdout.text(),
                stderr: stderr.text(),
                wall_seconds: wall,
                timed_out: timedOut,
                metadata: {
                    platform: os.platform(),
                    arch: os.arch(),
                    release: os.release(),
                    interpreter,
                },
            });
        });
    });
}
