/**
 * Process client for the slukit core.
 *
 * The core's `api` mode is a line protocol: one JSON request per stdin
 * line, one JSON response per stdout line, answered in order. A single
 * spawned interpreter serves any number of calls, so batch workloads pay
 * the startup cost once.
 */

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { createInterface, type Interface } from "node:readline";

/** An error raised inside the core; `name` is the core error name
 * (e.g. "UnbalancedBrackets", "EmptyReference", "MissingConfidences"). */
export class CoreError extends Error {
  constructor(name: string, message: string) {
    super(message);
    this.name = name;
  }
}

interface Pending {
  resolve: (value: unknown) => void;
  reject: (err: Error) => void;
}

export interface CoreClientOptions {
  /** Interpreter used to run the core; defaults to $SLUKIT_PYTHON or "python3". */
  python?: string;
  /** Extra arguments placed before `-m slukit api` (rarely needed). */
  pythonArgs?: string[];
}

export class CoreClient {
  private child: ChildProcessWithoutNullStreams;
  private rl: Interface;
  private pending = new Map<number, Pending>();
  private nextId = 1;
  private closed = false;
  private stderrTail = "";

  constructor(options: CoreClientOptions = {}) {
    const python = options.python ?? process.env["SLUKIT_PYTHON"] ?? "python3";
    const args = [...(options.pythonArgs ?? []), "-m", "slukit", "api"];
    this.child = spawn(python, args, { stdio: ["pipe", "pipe", "pipe"] });
    this.rl = createInterface({ input: this.child.stdout });
    this.rl.on("line", (line) => this.onLine(line));
    this.child.stderr.on("data", (chunk: Buffer) => {
      this.stderrTail = (this.stderrTail + chunk.toString()).slice(-2000);
    });
    this.child.on("error", (err) => this.failAll(err));
    this.child.on("exit", (code) => {
      if (!this.closed || this.pending.size > 0) {
        this.failAll(
          new Error(
            `slukit core exited (code ${code}); is it installed? ` +
              this.stderrTail,
          ),
        );
      }
    });
  }

  private onLine(line: string): void {
    let resp: { id: number; ok: boolean; result?: unknown; error?: string; message?: string };
    try {
      resp = JSON.parse(line);
    } catch {
      return; // not a protocol line
    }
    const pending = this.pending.get(resp.id);
    if (!pending) return;
    this.pending.delete(resp.id);
    if (resp.ok) {
      pending.resolve(resp.result);
    } else {
      pending.reject(new CoreError(resp.error ?? "CoreError", resp.message ?? ""));
    }
  }

  private failAll(err: Error): void {
    for (const pending of this.pending.values()) pending.reject(err);
    this.pending.clear();
  }

  /** Send one op to the core and await its result. */
  call<T>(op: string, args: Record<string, unknown> = {}): Promise<T> {
    if (this.closed) return Promise.reject(new Error("client is closed"));
    const id = this.nextId++;
    const payload = JSON.stringify({ id, op, args });
    return new Promise<T>((resolve, reject) => {
      this.pending.set(id, { resolve: resolve as (v: unknown) => void, reject });
      this.child.stdin.write(payload + "\n");
    });
  }

  close(): void {
    if (this.closed) return;
    this.closed = true;
    this.child.stdin.end();
    this.rl.close();
  }
}
