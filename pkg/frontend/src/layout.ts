/**
 * Deterministic force-directed layout.
 *
 * A fixed number of repulsion/spring steps from seeded starting
 * positions: the same seed always yields the same picture, so boards
 * are reproducible.  Plain float arithmetic only (no trig), which is
 * bit-stable across engines.
 */

import { SplitMix64 } from "./rng.js";

export interface LayoutPoint {
  x: number;
  y: number;
}

export interface LayoutEdge {
  source: string;
  target: string;
}

const STEPS = 250;
const MARGIN = 56;

export function layoutNetwork(
  slotIds: string[],
  edges: LayoutEdge[],
  seed: bigint,
  width: number,
  height: number,
): Map<string, LayoutPoint> {
  const points = new Map<string, LayoutPoint>();
  if (slotIds.length === 0) return points;
  if (slotIds.length === 1) {
    points.set(slotIds[0], { x: width / 2, y: height / 2 });
    return points;
  }

  const rng = new SplitMix64(seed);
  const innerW = width - 2 * MARGIN;
  const innerH = height - 2 * MARGIN;
  const xs: number[] = [];
  const ys: number[] = [];
  for (let i = 0; i < slotIds.length; i++) {
    xs.push(MARGIN + rng.nextFloat() * innerW);
    ys.push(MARGIN + rng.nextFloat() * innerH);
  }

  const index = new Map<string, number>();
  slotIds.forEach((id, i) => index.set(id, i));
  const springs = edges
    .filter((e) => index.has(e.source) && index.has(e.target))
    .map((e) => [index.get(e.source)!, index.get(e.target)!] as const);

  const n = slotIds.length;
  const k = 0.9 * Math.sqrt((innerW * innerH) / n);
  let temperature = Math.max(innerW, innerH) / 8;
  const cooling = temperature / (STEPS + 1);

  const dx = new Array<number>(n);
  const dy = new Array<number>(n);
  for (let step = 0; step < STEPS; step++) {
    dx.fill(0);
    dy.fill(0);
    // repulsion between every pair
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let vx = xs[i] - xs[j];
        let vy = ys[i] - ys[j];
        let d = Math.sqrt(vx * vx + vy * vy);
        if (d < 0.01) {
          // coincident points get a deterministic nudge apart
          vx = rng.nextFloat() - 0.5;
          vy = rng.nextFloat() - 0.5;
          d = Math.sqrt(vx * vx + vy * vy);
        }
        const force = (k * k) / d;
        dx[i] += (vx / d) * force;
        dy[i] += (vy / d) * force;
        dx[j] -= (vx / d) * force;
        dy[j] -= (vy / d) * force;
      }
    }
    // springs along edges
    for (const [a, b] of springs) {
      const vx = xs[a] - xs[b];
      const vy = ys[a] - ys[b];
      const d = Math.max(Math.sqrt(vx * vx + vy * vy), 0.01);
      const force = (d * d) / k;
      dx[a] -= (vx / d) * force;
      dy[a] -= (vy / d) * force;
      dx[b] += (vx / d) * force;
      dy[b] += (vy / d) * force;
    }
    // apply, capped by the cooling temperature
    for (let i = 0; i < n; i++) {
      const d = Math.max(Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]), 0.01);
      const cap = Math.min(d, temperature);
      xs[i] += (dx[i] / d) * cap;
      ys[i] += (dy[i] / d) * cap;
      xs[i] = Math.min(width - MARGIN, Math.max(MARGIN, xs[i]));
      ys[i] = Math.min(height - MARGIN, Math.max(MARGIN, ys[i]));
    }
    temperature -= cooling;
  }

  // hundredth-pixel grid keeps serialized coordinates tidy
  slotIds.forEach((id, i) => {
    points.set(id, {
      x: Math.round(xs[i] * 100) / 100,
      y: Math.round(ys[i] * 100) / 100,
    });
  });
  return points;
}
