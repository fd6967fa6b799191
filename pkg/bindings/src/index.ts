/**
 * TypeScript bindings for the slukit core.
 *
 * Thin wrappers over the core's JSON op interface: no metric, parsing or
 * combination logic lives on this side, so results are identical to the
 * core's by construction. All data crossing the boundary is plain JSON
 * (strings, arrays, objects).
 *
 * The six operations: {@link parseTree}, {@link serializeTree},
 * {@link wer}, {@link emAccuracy}, {@link combine},
 * {@link combineParses}. Core errors reject with a {@link CoreError}
 * whose `name` is the core error name.
 */

import { CoreClient, CoreError, type CoreClientOptions } from "./client.js";

export { CoreClient, CoreError, type CoreClientOptions };

/** A parse-tree node: a word leaf (string) or [kind, label, children]. */
export type ParseNode = string | [kind: "intent" | "slot", label: string, children: ParseNode[]];

export interface WerResult {
  wer: number;
  /** Exact rational as "num/den" (or a whole number string). */
  werExact: string;
  numSub: number;
  numDel: number;
  numIns: number;
  refLen: number;
}

export interface EmResult {
  em: number;
  emExact: string;
}

export interface CombinedParseResult {
  text: string;
  valid: boolean;
  fellBack: boolean;
}

let defaultClient: CoreClient | null = null;

/** The lazily spawned client shared by the module-level functions. */
export function getDefaultClient(): CoreClient {
  if (defaultClient === null) defaultClient = new CoreClient();
  return defaultClient;
}

/** Shut down the shared client (tests and clean process exits). */
export function closeDefaultClient(): void {
  if (defaultClient !== null) {
    defaultClient.close();
    defaultClient = null;
  }
}

function core(client?: CoreClient): CoreClient {
  return client ?? getDefaultClient();
}

/** Core package version (the bindings track it exactly). */
export async function coreVersion(client?: CoreClient): Promise<string> {
  const res = await core(client).call<{ version: string }>("version");
  return res.version;
}

/** Parse a linearized tree into plain nested data. */
export async function parseTree(text: string, client?: CoreClient): Promise<ParseNode> {
  const res = await core(client).call<{ tree: ParseNode }>("parse", { text });
  return res.tree;
}

/** Serialize nested data back to the canonical linearized string. */
export async function serializeTree(tree: ParseNode, client?: CoreClient): Promise<string> {
  const res = await core(client).call<{ text: string }>("serialize", { tree });
  return res.text;
}

/** Word error rate of `hyp` against `ref`, with alignment counts. */
export async function wer(
  hyp: string[],
  ref: string[],
  client?: CoreClient,
): Promise<WerResult> {
  const res = await core(client).call<{
    wer: number;
    wer_exact: string;
    num_sub: number;
    num_del: number;
    num_ins: number;
    ref_len: number;
  }>("wer", { hyp, ref });
  return {
    wer: res.wer,
    werExact: res.wer_exact,
    numSub: res.num_sub,
    numDel: res.num_del,
    numIns: res.num_ins,
    refLen: res.ref_len,
  };
}

/** Exact-match accuracy over [hypothesis, reference] string pairs. */
export async function emAccuracy(
  pairs: Array<[string, string]>,
  lowercase = false,
  client?: CoreClient,
): Promise<EmResult> {
  const res = await core(client).call<{ em: number; em_exact: string }>("em_accuracy", {
    pairs,
    lowercase,
  });
  return { em: res.em, emExact: res.em_exact };
}

/** ROVER-combine token sequences (quality order, best first). */
export async function combine(
  tokenLists: string[][],
  alpha = 1.0,
  client?: CoreClient,
): Promise<string[]> {
  const res = await core(client).call<{ tokens: string[] }>("combine", {
    token_lists: tokenLists,
    alpha,
  });
  return res.tokens;
}

/** ROVER-combine linearized parses with validity fallback. */
export async function combineParses(
  texts: string[],
  fallbackIndex = 0,
  client?: CoreClient,
): Promise<CombinedParseResult> {
  const res = await core(client).call<{ text: string; valid: boolean; fell_back: boolean }>(
    "combine_parses",
    { texts, fallback_index: fallbackIndex },
  );
  return { text: res.text, valid: res.valid, fellBack: res.fell_back };
}
