// Spawns a real session service for integration tests and tears it down.

import { spawn, type ChildProcess } from "node:child_process";

export interface RunningService {
  baseUrl: string;
  stop: () => Promise<void>;
}

const START_TIMEOUT_MS = 20_000;
const POLL_INTERVAL_MS = 150;

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function waitForConfig(baseUrl: string, child: ChildProcess): Promise<boolean> {
  const deadline = Date.now() + START_TIMEOUT_MS;
  let exited = false;
  child.once("exit", () => {
    exited = true;
  });
  while (Date.now() < deadline) {
    if (exited) return false;
    try {
      const response = await fetch(`${baseUrl}/config`);
      if (response.ok) return true;
    } catch {
      // Not listening yet.
    }
    await sleep(POLL_INTERVAL_MS);
  }
  return false;
}

function stopChild(child: ChildProcess): Promise<void> {
  return new Promise((resolve) => {
    if (child.exitCode !== null) {
      resolve();
      return;
    }
    const killTimer = setTimeout(() => child.kill("SIGKILL"), 2_000);
    child.once("exit", () => {
      clearTimeout(killTimer);
      resolve();
    });
    child.kill("SIGTERM");
  });
}

/** Start `python3 -m dcnsim.cli serve` on a free port and wait until it
 * answers /config; retries with a fresh port on collision. */
export async function startService(): Promise<RunningService> {
  let lastStderr = "";
  for (let attempt = 0; attempt < 5; attempt += 1) {
    const port = 18_000 + Math.floor(Math.random() * 20_000);
    const child = spawn(
      "python3",
      ["-m", "dcnsim.cli", "serve", "--port", String(port)],
      { stdio: ["ignore", "ignore", "pipe"] },
    );
    child.stderr?.on("data", (chunk) => {
      lastStderr += String(chunk);
    });
    const baseUrl = `http://127.0.0.1:${port}`;
    if (await waitForConfig(baseUrl, child)) {
      return { baseUrl, stop: () => stopChild(child) };
    }
    await stopChild(child);
  }
  throw new Error(`session service failed to start: ${lastStderr.slice(-500)}`);
}
