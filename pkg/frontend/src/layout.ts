// Seeded force-directed layout: same graph in, same picture out.

import type { MindMapJson } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  graph: MindMapJson,
  width = 640,
  height = 420,
  seed = 7,
  iterations = 150,
): Map<string, Point> {
  const rng = mulberry32(seed);
  const positions = new Map<string, Point>();
  for (const node of graph.nodes) {
    positions.set(node.id, {
      x: width * (0.2 + 0.6 * rng()),
      y: height * (0.2 + 0.6 * rng()),
    });
  }
  const ideal = Math.min(width, height) / Math.max(2, Math.sqrt(graph.nodes.length) + 1);
  for (let step = 0; step < iterations; step++) {
    const force = new Map<string, Point>();
    for (const node of graph.nodes) {
      force.set(node.id, { x: 0, y: 0 });
    }
    for (const a of graph.nodes) {
      for (const b of graph.nodes) {
        if (a.id === b.id) continue;
        const pa = positions.get(a.id)!;
        const pb = positions.get(b.id)!;
        let dx = pa.x - pb.x;
        let dy = pa.y - pb.y;
        const dist = Math.max(12, Math.hypot(dx, dy));
        const repulse = (ideal * ideal) / dist;
        const f = force.get(a.id)!;
        f.x += (dx / dist) * repulse;
        f.y += (dy / dist) * repulse;
      }
    }
    for (const edge of graph.edges) {
      const pa = positions.get(edge.from);
      const pb = positions.get(edge.to);
      if (!pa || !pb) continue;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const dist = Math.max(12, Math.hypot(dx, dy));
      const attract = (dist * dist) / ideal / 10;
      const fa = force.get(edge.from)!;
      const fb = force.get(edge.to)!;
      fa.x += (dx / dist) * attract;
      fa.y += (dy / dist) * attract;
      fb.x -= (dx / dist) * attract;
      fb.y -= (dy / dist) * attract;
    }
    const cool = 1 - step / iterations;
    for (const node of graph.nodes) {
      const p = positions.get(node.id)!;
      const f = force.get(node.id)!;
      const magnitude = Math.max(1, Math.hypot(f.x, f.y));
      p.x += (f.x / magnitude) * Math.min(8 * cool, magnitude);
      p.y += (f.y / magnitude) * Math.min(8 * cool, magnitude);
      p.x = Math.min(width - 60, Math.max(60, p.x));
      p.y = Math.min(height - 30, Math.max(30, p.y));
    }
  }
  return positions;
}
