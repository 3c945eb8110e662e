import { defineConfig } from 'vitest/config';

export default defineConfig({
    test: {
        include: ['tests/**/*.test.ts'],
        // Timeout-behavior tests wait on real child processes.
        testTimeout: 30_000,
        hookTimeout: 60_000,
        globalSetup: ['tests/build.setup.ts'],
    },
});
