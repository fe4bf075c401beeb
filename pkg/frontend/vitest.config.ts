import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    // the end-to-end test spawns a real service process and plays four
    // levels over HTTP, so give it room
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
