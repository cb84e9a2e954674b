import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // the integration file boots the curation service as a child process
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
