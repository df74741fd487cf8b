// Spawns two API servers for the integration tests: the built-in model on
// BUILTIN_PORT and a custom model file on CUSTOM_PORT. Unit tests mock
// fetch and never touch these.

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const BUILTIN_PORT = 8931;
export const CUSTOM_PORT = 8932;

const CUSTOM_MODEL = `model "workload"
input hours "Weekly hours" range 0 60
  term low shoulder_left 0 30
  term high shoulder_right 20 60
input errors "Error count" range 0 20
  term low shoulder_left 0 10
  term high shoulder_right 5 20
output action "Action" range 0 10
  term monitor triangle 0 2.5 5 band 0 5 "Monitor"
  term escalate triangle 5 7.5 10 band 5 10 "Escalate"
rule if hours is low and errors is low then monitor
rule if hours is low and errors is high then escalate
rule if hours is high and errors is low then monitor
rule if hours is high and errors is high then escalate
`;

function startServer(port: number, modelArg: string): ChildProcess {
    const child = spawn(
        "python3",
        ["-m", "fuzzdss.cli", "serve", "--model", modelArg, "--port", String(port)],
        { stdio: ["ignore", "inherit", "inherit"] },
    );
    return child;
}

async function waitForServer(port: number): Promise<void> {
    const deadline = Date.now() + 30000;
    while (Date.now() < deadline) {
        try {
            const res = await fetch(`http://127.0.0.1:${port}/api/v1/model`);
            if (res.ok) return;
        } catch {
            // not up yet
        }
        await new Promise((r) => setTimeout(r, 200));
    }
    throw new Error(`server on port ${port} did not come up`);
}

export default async function setup(): Promise<() => void> {
    const dir = mkdtempSync(join(tmpdir(), "fuzzdss-ui-"));
    const modelPath = join(dir, "workload.fzm");
    writeFileSync(modelPath, CUSTOM_MODEL);

    const servers = [
        startServer(BUILTIN_PORT, "builtin"),
        startServer(CUSTOM_PORT, modelPath),
    ];
    try {
        await Promise.all([waitForServer(BUILTIN_PORT), waitForServer(CUSTOM_PORT)]);
    } catch (error) {
        for (const s of servers) s.kill();
        rmSync(dir, { recursive: true, force: true });
        throw error;
    }
    return () => {
        for (const s of servers) s.kill();
        rmSync(dir, { recursive: true, force: true });
    };
}
