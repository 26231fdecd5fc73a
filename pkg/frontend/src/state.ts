import type { FilterQuery, InteractionHandle } from './types';

/**
 * UI state. Transitions happen only through {@link reduce}; every state maps
 * to exactly one server filter query via {@link filterOf}.
 */
export interface ViewState {
  selection: InteractionHandle | null;
  hover: InteractionHandle | null;
  legendExpanded: { clashPoints: boolean; strategies: boolean };
  /** block id whose card should sit at the top of the content panel */
  scrollAnchor: string | null;
}

export const initialState: ViewState = Object.freeze({
  selection: null,
  hover: null,
  legendExpanded: Object.freeze({ clashPoints: false, strategies: false }),
  scrollAnchor: null,
});

export type UiEvent =
  | { type: 'select'; handle: InteractionHandle }
  | { type: 'deselect' }
  | { type: 'hover'; handle: InteractionHandle | null }
  | { type: 'toggleLegend'; legend: 'clashPoints' | 'strategies' };

function sameHandle(a: InteractionHandle | null, b: InteractionHandle): boolean {
  return a !== null && a.targetKind === b.targetKind && a.targetId === b.targetId;
}

export function reduce(state: ViewState, event: UiEvent): ViewState {
  switch (event.type) {
    case 'select': {
      // selecting the active target again toggles it off
      if (sameHandle(state.selection, event.handle)) {
        return { ...state, selection: null, scrollAnchor: null };
      }
      return {
        ...state,
        selection: event.handle,
        scrollAnchor:
          event.handle.targetKind === 'block' ? event.handle.targetId : null,
      };
    }
    case 'deselect':
      return { ...state, selection: null, scrollAnchor: null };
    case 'hover':
      return { ...state, hover: event.handle };
    case 'toggleLegend':
      return {
        ...state,
        legendExpanded: {
          ...state.legendExpanded,
          [event.legend]: !state.legendExpanded[event.legend],
        },
      };
  }
}

/** The single server filter query this state corresponds to. */
export function filterOf(state: ViewState): Partial<FilterQuery> {
  const sel = state.selection;
  if (!sel) return {};
  switch (sel.targetKind) {
    case 'session':
      return { session: sel.targetId };
    case 'turn':
      return { turn: sel.targetId };
    case 'block':
      return { block: sel.targetId };
    case 'clashPoint':
      return { clashPoint: sel.targetId };
    default:
      return {};
  }
}

/**
 * Last-write-wins gate for async scene loads. Each request takes a ticket;
 * a response is applied only if no newer ticket has been issued since.
 */
export class RequestSequencer {
  private next = 1;
  private latest = 0;

  begin(): number {
    this.latest = this.next;
    return this.next++;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.latest;
  }
}
