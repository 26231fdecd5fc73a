/**
 * JSON shapes served by the conch HTTP API.
 *
 * These mirror the server's scene-graph serialization; the client never
 * invents geometry or highlight sets of its own, it draws what it receives.
 */

export type TargetKind =
  | 'session'
  | 'turn'
  | 'block'
  | 'clashPoint'
  | 'disagreement'
  | 'strategy';

export interface InteractionHandle {
  targetKind: TargetKind;
  targetId: string;
}

export interface SceneNode {
  kind: string;
  id: string;
  geometry?: Record<string, number>;
  style?: string;
  handle?: InteractionHandle;
  text?: string;
  data?: Record<string, string>;
  children?: SceneNode[];
}

export interface HighlightSets {
  sessions: string[];
  turns: string[];
  blocks: string[];
  clashPoints: string[];
}

export interface FilterQuery {
  session: string | null;
  turn: string | null;
  block: string | null;
  clashPoint: string | null;
  chordColorMode: 'side' | 'clash';
}

export interface ClashLegendEntry {
  id: string;
  label: string;
  colorKey: string;
  interactions: number;
}

export interface StrategyLegendEntry {
  id: string;
  name: string;
  iconKey: string;
  description: string;
}

export interface SceneMeta {
  views: string[];
  filter: FilterQuery;
  highlights: HighlightSets;
  scrollTarget: string | null;
  palette: Record<string, string>;
  legend: {
    clashPoints: ClashLegendEntry[];
    strategies: StrategyLegendEntry[];
  };
  counts: { chords: number; sessions: number; blocks: number };
  warnings: string[];
}

export interface SceneGraph {
  meta: SceneMeta;
  root: SceneNode;
}

export interface DisagreementDigest {
  id: string;
  label: string;
  affirmativeViewpoint: string;
  negativeViewpoint: string;
  pathLength: number;
}

export interface ClashPointRecord {
  id: string;
  label: string;
  colorKey: string;
  color: string;
  blockCount: number;
  interactionCount: number;
  disagreements: DisagreementDigest[];
}

export interface BlockCardRun {
  text: string;
  sentences: [number, number];
  strategyIds: string[];
  iconKeys: string[];
}

export interface BlockCard {
  blockId: string;
  sessionId: string;
  turnId: string;
  debaterId: string;
  identifier: string;
  side: string;
  contentLength: number;
  clashPoints: { id: string; label: string; colorKey: string }[];
  disagreements: DisagreementDigest[];
  runs: BlockCardRun[];
}

export interface BlockCardContext {
  card: BlockCard;
  before: BlockCard[];
  after: BlockCard[];
}

export interface CorpusStats {
  debaterCount: number;
  sessionCount: number;
  turnCount: number;
  blockCount: number;
  totalContentLength: number;
  perSide: Record<string, number>;
  perSession: { sessionId: string; contentLength: number }[];
}
