import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 30_000,
    // Integration tests share one spawned service process per file; keep
    // files sequential so ports and sessions never interleave.
    fileParallelism: false,
  },
});
