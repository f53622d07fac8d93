// Layered layout for small state machines: breadth-first ranks from the
// initial states, deterministic ordering inside each rank. No external
// layout engine; the models this view targets are a dozen states or so.
export const NODE_W = 150;
export const NODE_H = 46;
export const GAP_X = 70;
export const GAP_Y = 28;
function idSortKey(id) {
    const m = /^s(\d+)$/.exec(id);
    return m ? [0, Number(m[1]), id] : [1, 0, id];
}
function compareIds(a, b) {
    const [ka, na, sa] = idSortKey(a);
    const [kb, nb, sb] = idSortKey(b);
    if (ka !== kb)
        return ka - kb;
    if (na !== nb)
        return na - nb;
    return sa < sb ? -1 : sa > sb ? 1 : 0;
}
export function layoutModel(model) {
    const outgoing = new Map();
    for (const t of model.transitions) {
        const list = outgoing.get(t.from) ?? [];
        list.push({ label: t.label, to: t.to });
        outgoing.set(t.from, list);
    }
    for (const list of outgoing.values()) {
        list.sort((a, b) => (a.label < b.label ? -1 : a.label > b.label ? 1
            : compareIds(a.to, b.to)));
    }
    const rank = new Map();
    const queue = model.states.filter((s) => s.initial).map((s) => s.id)
        .sort(compareIds);
    for (const id of queue)
        rank.set(id, 0);
    let head = 0;
    while (head < queue.length) {
        const id = queue[head];
        head += 1;
        for (const edge of outgoing.get(id) ?? []) {
            if (!rank.has(edge.to)) {
                rank.set(edge.to, (rank.get(id) ?? 0) + 1);
                queue.push(edge.to);
            }
        }
    }
    // unreachable states go to a trailing rank so they stay visible
    const maxRank = Math.max(0, ...rank.values());
    for (const s of model.states) {
        if (!rank.has(s.id))
            rank.set(s.id, maxRank + 1);
    }
    const byRank = new Map();
    for (const s of model.states) {
        const r = rank.get(s.id);
        const list = byRank.get(r) ?? [];
        list.push(s.id);
        byRank.set(r, list);
    }
    const nodes = [];
    let tallest = 0;
    for (const [r, ids] of [...byRank.entries()].sort((a, b) => a[0] - b[0])) {
        ids.sort(compareIds);
        tallest = Math.max(tallest, ids.length);
        ids.forEach((id, row) => {
            nodes.push({
                id,
                x: 20 + r * (NODE_W + GAP_X),
                y: 20 + row * (NODE_H + GAP_Y),
            });
        });
    }
    const ranks = byRank.size;
    return {
        nodes,
        width: 40 + Math.max(1, ranks) * (NODE_W + GAP_X) - GAP_X,
        height: 40 + Math.max(1, tallest) * (NODE_H + GAP_Y) - GAP_Y,
    };
}
