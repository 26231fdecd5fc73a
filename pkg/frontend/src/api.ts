import type {
  BlockCardContext,
  ClashPointRecord,
  CorpusStats,
  FilterQuery,
  SceneGraph,
} from './types';

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

/** Serialize a filter to query params; null fields are omitted entirely. */
export function filterParams(filter: Partial<FilterQuery>): string {
  const params = new URLSearchParams();
  if (filter.session) params.set('session', filter.session);
  if (filter.turn) params.set('turn', filter.turn);
  if (filter.block) params.set('block', filter.block);
  if (filter.clashPoint) params.set('clashPoint', filter.clashPoint);
  if (filter.chordColorMode && filter.chordColorMode !== 'side') {
    params.set('chordColorMode', filter.chordColorMode);
  }
  const out = params.toString();
  return out ? `?${out}` : '';
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path);
    if (!res.ok) {
      throw new ApiError(res.status, `GET ${path} -> ${res.status}`);
    }
    return (await res.json()) as T;
  }

  processScene(filter: Partial<FilterQuery> = {}): Promise<SceneGraph> {
    return this.get(`/api/scene/process${filterParams(filter)}`);
  }

  strategyScene(filter: Partial<FilterQuery> = {}): Promise<SceneGraph> {
    return this.get(`/api/scene/strategy${filterParams(filter)}`);
  }

  clashPoints(): Promise<ClashPointRecord[]> {
    return this.get('/api/clash-points');
  }

  stats(): Promise<CorpusStats> {
    return this.get('/api/stats');
  }

  blockCard(blockId: string, context = 0): Promise<BlockCardContext> {
    const suffix = context > 0 ? `?context=${context}` : '';
    return this.get(`/api/blocks/${encodeURIComponent(blockId)}${suffix}`);
  }
}
