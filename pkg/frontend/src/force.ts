// Tiny force-directed layout: spring edges, pairwise repulsion, mild
// centering. Intentionally non-deterministic (random start); only the
// node/edge sets carry meaning.

import { NeighborGraph } from "./graphModel.js";

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export class ForceLayout {
  nodes: LayoutNode[] = [];
  private index = new Map<string, number>();
  private edges: { a: number; b: number; weight: number }[] = [];

  constructor(
    private readonly width: number,
    private readonly height: number,
  ) {}

  /** Keep positions of surviving nodes, scatter newcomers near the middle. */
  sync(graph: NeighborGraph): void {
    const next: LayoutNode[] = [];
    const nextIndex = new Map<string, number>();
    for (const id of graph.nodes.keys()) {
      const old = this.index.has(id)
        ? this.nodes[this.index.get(id)!]
        : undefined;
      nextIndex.set(id, next.length);
      next.push(
        old ?? {
          id,
          x: this.width / 2 + (Math.random() - 0.5) * 80,
          y: this.height / 2 + (Math.random() - 0.5) * 80,
          vx: 0,
          vy: 0,
        },
      );
    }
    this.nodes = next;
    this.index = nextIndex;
    this.edges = [];
    for (const e of graph.edges.values()) {
      const a = nextIndex.get(e.a);
      const b = nextIndex.get(e.b);
      if (a !== undefined && b !== undefined) {
        this.edges.push({ a, b, weight: e.weight });
      }
    }
  }

  step(): void {
    const n = this.nodes.length;
    if (n === 0) return;
    const repulsion = 1200;
    const spring = 0.02;
    const ideal = 90;
    for (let i = 0; i < n; i++) {
      const a = this.nodes[i]!;
      for (let j = i + 1; j < n; j++) {
        const b = this.nodes[j]!;
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const d2 = dx * dx + dy * dy + 0.01;
        const f = repulsion / d2;
        const d = Math.sqrt(d2);
        dx /= d;
        dy /= d;
        a.vx += dx * f;
        a.vy += dy * f;
        b.vx -= dx * f;
        b.vy -= dy * f;
      }
    }
    for (const e of this.edges) {
      const a = this.nodes[e.a]!;
      const b = this.nodes[e.b]!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.sqrt(dx * dx + dy * dy) + 1e-6;
      const pull = spring * (d - ideal) * Math.max(e.weight, 0.05);
      a.vx += (dx / d) * pull;
      a.vy += (dy / d) * pull;
      b.vx -= (dx / d) * pull;
      b.vy -= (dy / d) * pull;
    }
    for (const node of this.nodes) {
      node.vx += (this.width / 2 - node.x) * 0.002;
      node.vy += (this.height / 2 - node.y) * 0.002;
      node.vx *= 0.85;
      node.vy *= 0.85;
      node.x = Math.min(this.width - 10, Math.max(10, node.x + node.vx));
      node.y = Math.min(this.height - 10, Math.max(10, node.y + node.vy));
    }
  }

  position(id: string): LayoutNode | undefined {
    const i = this.index.get(id);
    return i === undefined ? undefined : this.nodes[i];
  }
}
