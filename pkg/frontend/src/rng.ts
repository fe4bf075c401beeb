/**
 * splitmix64 over BigInt, matching the service's puzzle generator bit
 * for bit so a board layout can be seeded from the same seed the
 * service reports for the puzzle.
 */

const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;
const MIX1 = 0xbf58476d1ce4e5b9n;
const MIX2 = 0x94d049bb133111ebn;

export function mix64(x: bigint): bigint {
  let z = (x + GAMMA) & MASK64;
  z = ((z ^ (z >> 30n)) * MIX1) & MASK64;
  z = ((z ^ (z >> 27n)) * MIX2) & MASK64;
  return (z ^ (z >> 31n)) & MASK64;
}

/** Independent 64-bit seed for `stream`, derived from `base`. */
export function deriveSeed(base: bigint, stream: bigint): bigint {
  return mix64((base & MASK64) ^ mix64(stream & MASK64));
}

export class SplitMix64 {
  private state: bigint;

  constructor(seed: bigint) {
    this.state = seed & MASK64;
  }

  nextU64(): bigint {
    this.state = (this.state + GAMMA) & MASK64;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * MIX1) & MASK64;
    z = ((z ^ (z >> 27n)) * MIX2) & MASK64;
    return (z ^ (z >> 31n)) & MASK64;
  }

  /** Uniform float in [0, 1) from the top 53 bits. */
  nextFloat(): number {
    return Number(this.nextU64() >> 11n) / 2 ** 53;
  }

  /** Uniform integer in [0, n), unbiased via rejection sampling. */
  below(n: number): number {
    if (n <= 0) throw new RangeError("below() requires n >= 1");
    const big = BigInt(n);
    const limit = (1n << 64n) - ((1n << 64n) % big);
    for (;;) {
      const draw = this.nextU64();
      if (draw < limit) return Number(draw % big);
    }
  }
}
