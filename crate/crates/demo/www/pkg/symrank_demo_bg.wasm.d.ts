/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const class_table: (a: number) => [number, number, number, number];
export const fiber_census: (a: number, b: number) => [number, number, number, number];
export const rank_counts: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
