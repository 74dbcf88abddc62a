import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globalSetup: ["tests/setup-server.ts"],
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
