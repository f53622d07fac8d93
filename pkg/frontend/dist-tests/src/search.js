// Keyword search over symbol listings: case-insensitive substring terms,
// all terms must match (fields match on path, functions on name or file).
function terms(query) {
    return query.toLowerCase().split(/\s+/).filter((t) => t.length > 0);
}
export function searchFields(fields, query) {
    const wanted = terms(query);
    if (wanted.length === 0)
        return fields;
    return fields.filter((f) => {
        const hay = f.path.toLowerCase();
        return wanted.every((t) => hay.includes(t));
    });
}
export function searchFunctions(functions, query) {
    const wanted = terms(query);
    if (wanted.length === 0)
        return functions;
    return functions.filter((f) => {
        const hay = `${f.name} ${f.file}`.toLowerCase();
        return wanted.every((t) => hay.includes(t));
    });
}
