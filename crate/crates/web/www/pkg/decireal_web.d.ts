/* tslint:disable */
/* eslint-disable */

/**
 * Monte Carlo frequency of the lower carry choice; see
 * [`decireal::computable::carry_stats`].
 */
export function carry_stats(op: string, k: number, trials: number, seed: number): string;

/**
 * Evaluate an expression to `digits` places and certify the result
 * against the interval oracle when it supports the expression.
 */
export function eval_expr(input: string, digits: number): string;

/**
 * Inscribed and circumscribed lengths of the upper unit semicircle cut into
 * `2^halvings` equal arcs, with the digits of pi they already settle.
 */
export function pi_polygon(halvings: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly carry_stats: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly eval_expr: (a: number, b: number, c: number) => [number, number];
    readonly pi_polygon: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
