// Keyword search over symbol listings: case-insensitive substring terms,
// all terms must match (fields match on path, functions on name or file).

import type { FieldInfo, FunctionInfo } from "./types.js";

function terms(query: string): string[] {
  return query.toLowerCase().split(/\s+/).filter((t) => t.length > 0);
}

export function searchFields(fields: FieldInfo[], query: string): FieldInfo[] {
  const wanted = terms(query);
  if (wanted.length === 0) return fields;
  return fields.filter((f) => {
    const hay = f.path.toLowerCase();
    return wanted.every((t) => hay.includes(t));
  });
}

export function searchFunctions(functions: FunctionInfo[], query: string): FunctionInfo[] {
  const wanted = terms(query);
  if (wanted.length === 0) return functions;
  return functions.filter((f) => {
    const hay = `${f.name} ${f.file}`.toLowerCase();
    return wanted.every((t) => hay.includes(t));
  });
}
