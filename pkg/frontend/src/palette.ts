/** Fixed categorical palette keyed by class id.
 *
 * Ten distinguishable hues (colorblind-leaning ordering); class ids beyond
 * the palette wrap around.  Verdicts and chrome use the neutral tones.
 */

export const CLASS_PALETTE: readonly string[] = [
  "#4e79a7", // blue
  "#f28e2b", // orange
  "#59a14f", // green
  "#e15759", // red
  "#b07aa1", // purple
  "#edc948", // yellow
  "#76b7b2", // teal
  "#ff9da7", // pink
  "#9c755f", // brown
  "#bab0ac", // grey
];

export function classColor(classId: number): string {
  const idx = ((classId % CLASS_PALETTE.length) + CLASS_PALETTE.length) % CLASS_PALETTE.length;
  return CLASS_PALETTE[idx]!;
}

/** Colors for non-class categories (verdicts, bin names) on categorical
 * axes: stable per axis by category position. */
export const NEUTRAL_SEQUENCE: readonly string[] = [
  "#6b8ab8",
  "#d98a5e",
  "#7fae79",
  "#c96b6d",
  "#a58bb5",
  "#c9b35c",
  "#8cb8b4",
  "#d9a0a8",
];

export function sequenceColor(position: number): string {
  return NEUTRAL_SEQUENCE[position % NEUTRAL_SEQUENCE.length]!;
}

export const SELECTION_COLOR = "#222222";
export const HOP_COLOR = "#888888";
