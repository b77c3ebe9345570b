import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // every test shells out to the Python CLI; interpreter start-up
    // dominates, so give each test plenty of room
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
