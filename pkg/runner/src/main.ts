#!/usr/bin/env node
// CLI entry point. Usage: jaxport-runner <file> --timeout <seconds>
//
// Standard output carries exactly one JSON result object and nothing
// else; diagnostics go to standard error. The runner exits 0 whenever a
// result was produced, regardless of the snippet's own exit code.

import { parseArgs } from 'node:util';

import {
    DEFAULT_INTERPRETER,
    DEFAULT_MAX_OUTPUT_BYTES,
    execute,
} from './execute.js';

const USAGE =
    'usage: jaxport-runner <file> --timeout <seconds> ' +
    '[--interpreter <cmd>] [--max-output-bytes <n>]';

class UsageError extends Error {}

interface CliArgs {
    file: string;
    timeoutSeconds: number;
    interpreter: string;
    maxOutputBytes: number;
}

function parseCli(argv: string[]): CliArgs {
    let parsed;
    try {
        parsed = parseArgs({
            args: argv,
            options: {
                timeout: { type: 'string' },
                interpreter: { type: 'string', default: DEFAULT_INTERPRETER },
                'max-output-bytes': {
                    type: 'string',
                    default: String(DEFAULT_MAX_OUTPUT_BYTES),
                },
            },
            allowPositionals: true,
        });
    } catch (err) {
        throw new UsageError((err as Error).message);
    }
    const { values, positionals } = parsed;
    if (positionals.length !== 1) {
        throw new UsageError('expected exactly one snippet file');
    }
    if (values.timeout === undefined) {
        throw new UsageError('--timeout is required');
    }
    const timeoutSeconds = Number(values.timeout);
    if (!Number.isFinite(timeoutSeconds) || timeoutSeconds <= 0) {
        throw new UsageError('--timeout must be a positive number of seconds');
    }
    const maxOutputBytes = Number(values['max-output-bytes']);
    if (!Number.isInteger(maxOutputBytes) || maxOutputBytes <= 0) {
        throw new UsageError('--max-output-bytes must be a positive integer');
    }
    return {
        file: positionals[0] as string,
        timeoutSeconds,
        interpreter: values.interpreter as string,
        maxOutputBytes,
    };
}

async function main(argv: string[]): Promise<number> {
    let args: CliArgs;
    try {
        args = parseCli(argv);
    } catch (err) {
        process.stderr.write(`${(err as Error).message}\n${USAGE}\n`);
        return 2;
    }
    try {
        const result = await execute(args.file, args.timeoutSeconds, {
            interpreter: args.interpreter,
            maxOutputBytes: args.maxOutputBytes,
        });
        process.stdout.write(JSON.stringify(result) + '\n');
        return 0;
    } catch (err) {
        process.stderr.write(`jaxport-runner: ${(err as Error).message}\n`);
        return 1;
    }
}

main(process.argv.slice(2)).then(
    (code) => {
        process.exitCode = code;
    },
    (err) => {
        process.stderr.write(`jaxport-runner: ${String(err)}\n`);
        process.exitCode = 1;
    },
);
