import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globalSetup: "./tests/setup.ts",
    include: ["tests/**/*.test.ts"],
    // tests share one service and one registry, so files run one at a time
    fileParallelism: false,
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
