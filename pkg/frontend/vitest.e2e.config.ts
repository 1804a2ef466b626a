import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests-e2e/*.test.ts"],
    environment: "jsdom",
    fileParallelism: false,
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
