/* tslint:disable */
/* eslint-disable */

/**
 * Every `[Sym^{n,k}]` for `k <= n <= max_n`, with its coefficient list
 * (ascending powers) for plotting.
 */
export function class_table(max_n: number): string;

/**
 * (minor rank, full rank) census with the per-bucket completion counts.
 */
export function fiber_census(n: number, p: number): string;

/**
 * Brute-force rank histogram over `F_p` next to the classes at `L = p`.
 */
export function rank_counts(n: number, p: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly class_table: (a: number) => [number, number, number, number];
    readonly fiber_census: (a: number, b: number) => [number, number, number, number];
    readonly rank_counts: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
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
