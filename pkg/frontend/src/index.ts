export { ApiClient, ApiError, filterParams } from './api';
export { ConchApp } from './app';
export { SceneRenderer, VIEW_STYLESHEET } from './render';
export {
  RequestSequencer,
  filterOf,
  initialState,
  reduce,
} from './state';
export type { UiEvent, ViewState } from './state';
export type {
  BlockCard,
  BlockCardContext,
  ClashPointRecord,
  CorpusStats,
  FilterQuery,
  InteractionHandle,
  SceneGraph,
  SceneMeta,
  SceneNode,
} from './types';
