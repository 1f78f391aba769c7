/** Seeded force-directed layout for one farm graph.
 *
 * Positions depend only on the graph document, so a graph renders the
 * same on every load and snapshot tests stay stable.  The graphs are
 * small (tens of vertices), so the O(n^2) force pass is fine.
 */

import { GraphDoc } from "./types.js";

export interface Point {
    x: number;
    y: number;
}

export interface LayoutBox {
    width: number;
    height: number;
}

/** Small fast PRNG; same seed, same stream, on every platform. */
export function mulberry32(seed: number): () => number {
    let a = seed >>> 0;
    return () => {
        a = (a + 0x6d2b79f5) >>> 0;
        let t = a;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}

/** FNV-1a over the ids that define the drawing, as the layout seed. */
export function layoutSeed(doc: GraphDoc): number {
    const ids = [
        doc.id,
        ...doc.entities.map(e => e.id),
        ...doc.relations.map(r => r.id),
    ];
    let hash = 0x811c9dc5;
    for (const id of ids) {
        for (let i = 0; i < id.length; i++) {
            hash = Math.imul(hash ^ id.charCodeAt(i), 0x01000193);
        }
        hash = Math.imul(hash ^ 0x2f, 0x01000193);
    }
    return hash >>> 0;
}

const ITERATIONS = 250;
const MARGIN = 28;

/** Compute a position for every vertex id of the graph. */
export function forceLayout(doc: GraphDoc, box: LayoutBox): Map<string, Point> {
    const ids = [
        ...doc.entities.map(e => e.id),
        ...doc.relations.map(r => r.id),
    ];
    const rand = mulberry32(layoutSeed(doc));
    const index = new Map<string, number>();
    ids.forEach((id, i) => index.set(id, i));

    const xs = ids.map(() => MARGIN + rand() * (box.width - 2 * MARGIN));
    const ys = ids.map(() => MARGIN + rand() * (box.height - 2 * MARGIN));

    const links: Array<[number, number]> = [];
    for (const edge of doc.edges) {
        const a = index.get(edge.relation);
        const b = index.get(edge.entity);
        if (a !== undefined && b !== undefined) {
            links.push([a, b]);
        }
    }

    const n = ids.length;
    if (n === 0) {
        return new Map();
    }
    const area = box.width * box.height;
    const k = Math.sqrt(area / n) * 0.7;
    const rest = Math.min(k * 1.2, 120);

    for (let step = 0; step < ITERATIONS; step++) {
        const cool = 1 - step / ITERATIONS;
        const maxMove = 0.1 * Math.min(box.width, box.height) * cool + 1;
        const dx = new Array<number>(n).fill(0);
        const dy = new Array<number>(n).fill(0);

        for (let i = 0; i < n; i++) {
            for (let j = i + 1; j < n; j++) {
                let vx = xs[i]! - xs[j]!;
                let vy = ys[i]! - ys[j]!;
                let d2 = vx * vx + vy * vy;
                if (d2 < 0.01) {
                    // Coincident points get a deterministic nudge apart.
                    vx = ((i + 1) % 7) - 3;
                    vy = ((j + 1) % 5) - 2;
                    d2 = vx * vx + vy * vy;
                }
                const f = (k * k) / d2;
                dx[i]! += vx * f;
                dy[i]! += vy * f;
                dx[j]! -= vx * f;
                dy[j]! -= vy * f;
            }
        }
        for (const [a, b] of links) {
            const vx = xs[b]! - xs[a]!;
            const vy = ys[b]! - ys[a]!;
            const d = Math.sqrt(vx * vx + vy * vy) || 1;
            const f = (d - rest) / d * 0.12;
            dx[a]! += vx * f;
            dy[a]! += vy * f;
            dx[b]! -= vx * f;
            dy[b]! -= vy * f;
        }
        const cx = box.width / 2;
        const cy = box.height / 2;
        for (let i = 0; i < n; i++) {
            dx[i]! += (cx - xs[i]!) * 0.02;
            dy[i]! += (cy - ys[i]!) * 0.02;
            const len = Math.sqrt(dx[i]! * dx[i]! + dy[i]! * dy[i]!) || 1;
            const move = Math.min(len, maxMove);
            xs[i] = xs[i]! + (dx[i]! / len) * move;
            ys[i] = ys[i]! + (dy[i]! / len) * move;
            xs[i] = Math.max(MARGIN, Math.min(box.width - MARGIN, xs[i]!));
            ys[i] = Math.max(MARGIN, Math.min(box.height - MARGIN, ys[i]!));
        }
    }

    const out = new Map<string, Point>();
    ids.forEach((id, i) => {
        const x = xs[i]!;
        const y = ys[i]!;
        if (!Number.isFinite(x) || !Number.isFinite(y)) {
            throw new Error(`layout diverged at vertex ${id}`);
        }
        out.set(id, { x: Math.round(x * 100) / 100, y: Math.round(y * 100) / 100 });
    });
    return out;
}
