// Minimal ambient declarations for the Node APIs the test suite touches.
// The console deliberately has no package dependencies, so the usual
// @types/node is unavailable; these cover exactly what the tests use.

declare module "node:test" {
  export function test(name: string, fn: (t?: unknown) => unknown): void;
}

declare module "node:assert/strict" {
  interface Assert {
    (value: unknown, message?: string): asserts value;
    equal(actual: unknown, expected: unknown, message?: string): void;
    notEqual(actual: unknown, expected: unknown, message?: string): void;
    deepEqual(actual: unknown, expected: unknown, message?: string): void;
    ok(value: unknown, message?: string): asserts value;
    fail(message?: string): never;
    match(value: string, re: RegExp, message?: string): void;
    rejects(block: Promise<unknown> | (() => Promise<unknown>),
            error?: unknown): Promise<void>;
    throws(block: () => unknown, error?: unknown): void;
  }
  const assert: Assert;
  export default assert;
}

declare module "node:child_process" {
  export interface SpawnedProcess {
    stdout: { on(event: string, cb: (chunk: Uint8Array) => void): void };
    stderr: { on(event: string, cb: (chunk: Uint8Array) => void): void };
    on(event: string, cb: (...args: unknown[]) => void): void;
    kill(signal?: string): void;
    killed: boolean;
    exitCode: number | null;
  }
  export function spawn(cmd: string, args: string[],
                        opts?: Record<string, unknown>): SpawnedProcess;
  export function spawnSync(cmd: string, args: string[],
                            opts?: Record<string, unknown>):
    { status: number | null; stdout: string; stderr: string };
}

declare module "node:fs" {
  export function mkdtempSync(prefix: string): string;
  export function mkdirSync(path: string, opts?: { recursive?: boolean }): void;
  export function writeFileSync(path: string, data: string): void;
  export function readFileSync(path: string, encoding: string): string;
  export function rmSync(path: string, opts?: { recursive?: boolean; force?: boolean }): void;
  export function existsSync(path: string): boolean;
}

declare module "node:path" {
  export function join(...parts: string[]): string;
}

declare module "node:os" {
  export function tmpdir(): string;
}

declare const process: {
  env: Record<string, string | undefined>;
  platform: string;
};
