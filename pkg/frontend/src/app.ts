import { ApiClient, ApiError } from './api';
import { SceneRenderer } from './render';
import {
  RequestSequencer,
  UiEvent,
  ViewState,
  filterOf,
  initialState,
  reduce,
} from './state';
import type {
  ClashPointRecord,
  InteractionHandle,
  SceneGraph,
  TargetKind,
} from './types';

/**
 * Coordinating shell: one legend, two scene hosts (process bundle and
 * strategy bundle), a tooltip layer, and globally linked selection.
 *
 * All geometry and every highlight class come from the server's scene JSON;
 * this class only routes user events into filter queries and re-renders.
 */
export class ConchApp {
  state: ViewState = initialState;

  private readonly seq = new RequestSequencer();
  private readonly renderer: SceneRenderer;
  private readonly doc: Document;
  private clashRecords: ClashPointRecord[] = [];
  private lastProcess: SceneGraph | null = null;
  private lastStrategy: SceneGraph | null = null;

  readonly legendHost: HTMLElement;
  readonly sceneHost: HTMLElement;
  readonly strategyHost: HTMLElement;
  readonly tooltip: HTMLElement;
  readonly banner: HTMLElement;

  constructor(
    readonly root: HTMLElement,
    readonly api: ApiClient,
  ) {
    this.doc = root.ownerDocument;
    this.renderer = new SceneRenderer(this.doc);
    this.banner = this.panel('conch-banner');
    this.banner.hidden = true;
    this.legendHost = this.panel('conch-legend');
    this.sceneHost = this.panel('conch-scenes');
    this.strategyHost = this.panel('conch-strategy');
    this.tooltip = this.panel('conch-tooltip');
    this.tooltip.hidden = true;

    this.root.addEventListener('click', (ev) => this.onClick(ev));
    this.root.addEventListener('mouseover', (ev) => this.onHover(ev));
    this.root.addEventListener('mouseout', () => this.hideTooltip());
  }

  private panel(id: string): HTMLElement {
    const el = this.doc.createElement('div');
    el.id = id;
    this.root.appendChild(el);
    return el;
  }

  async init(): Promise<void> {
    this.clashRecords = await this.api.clashPoints();
    await this.refresh();
  }

  /** Route a user event through the reducer; refetch when the filter moved. */
  async dispatch(event: UiEvent): Promise<void> {
    const before = this.state;
    this.state = reduce(this.state, event);
    const filterChanged =
      JSON.stringify(filterOf(before)) !== JSON.stringify(filterOf(this.state));
    if (filterChanged) {
      await this.refresh(before);
    } else if (event.type === 'toggleLegend') {
      this.renderLegend();
    }
  }

  private async refresh(revertTo?: ViewState): Promise<void> {
    const ticket = this.seq.begin();
    const filter = filterOf(this.state);
    try {
      const [process, strategy] = await Promise.all([
        this.api.processScene(filter),
        this.api.strategyScene(filter),
      ]);
      if (!this.seq.isCurrent(ticket)) return; // a newer request won
      this.lastProcess = process;
      this.lastStrategy = strategy;
      this.banner.hidden = true;
      this.renderScenes();
    } catch (err) {
      if (!this.seq.isCurrent(ticket)) return;
      if (err instanceof ApiError && err.status === 404 && revertTo) {
        // stale id: keep the old picture, put the state back
        console.warn(`selection target vanished: ${err.message}`);
        this.state = revertTo;
        return;
      }
      this.showBanner(err instanceof Error ? err.message : String(err));
    }
  }

  private renderScenes(): void {
    if (!this.lastProcess || !this.lastStrategy) return;
    try {
      this.renderer.renderScene(this.lastProcess, this.sceneHost);
      this.renderer.renderScene(this.lastStrategy, this.strategyHost);
    } catch (err) {
      this.showBanner(
        `malformed scene: ${err instanceof Error ? err.message : err}`,
      );
      return;
    }
    this.renderLegend();
    const anchor = this.lastProcess.meta.scrollTarget;
    if (anchor) this.scrollCardIntoView(anchor);
  }

  private showBanner(message: string): void {
    this.banner.hidden = false;
    this.banner.className = 'validation-banner';
    this.banner.textContent = message;
  }

  private scrollCardIntoView(blockId: string): void {
    for (const el of Array.from(
      this.sceneHost.querySelectorAll('.scroll-target'),
    )) {
      el.classList.remove('scroll-target');
    }
    const card = this.sceneHost.querySelector(`[id="card-${blockId}"]`);
    if (!card) return;
    card.classList.add('scroll-target');
    const scrollable = card as Element & { scrollIntoView?: (o?: object) => void };
    if (typeof scrollable.scrollIntoView === 'function') {
      scrollable.scrollIntoView({ block: 'start' });
    }
  }

  private renderLegend(): void {
    const meta = this.lastProcess?.meta;
    if (!meta) return;
    this.legendHost.textContent = '';

    const clashList = this.doc.createElement('ul');
    clashList.id = 'legend-clash-points';
    for (const entry of meta.legend.clashPoints) {
      const li = this.doc.createElement('li');
      li.dataset.targetKind = 'clashPoint';
      li.dataset.targetId = entry.id;
      li.style.color = meta.palette[entry.colorKey] ?? '#888';
      li.textContent = `${entry.label} (${entry.interactions})`;
      if (this.state.selection?.targetId === entry.id) {
        li.classList.add('active');
      }
      if (this.state.legendExpanded.clashPoints) {
        const full = this.clashRecords.find((c) => c.id === entry.id);
        const sub = this.doc.createElement('ul');
        for (const d of full?.disagreements ?? []) {
          const item = this.doc.createElement('li');
          item.className = 'disagreement-entry';
          item.dataset.disagreementId = d.id;
          item.textContent = `${d.label}: ${d.affirmativeViewpoint} / ${d.negativeViewpoint}`;
          sub.appendChild(item);
        }
        li.appendChild(sub);
      }
      clashList.appendChild(li);
    }
    const clashToggle = this.doc.createElement('button');
    clashToggle.id = 'legend-clash-toggle';
    clashToggle.dataset.legend = 'clashPoints';
    clashToggle.textContent = this.state.legendExpanded.clashPoints
      ? 'collapse'
      : 'expand';

    const strategyList = this.doc.createElement('ul');
    strategyList.id = 'legend-strategies';
    for (const entry of meta.legend.strategies) {
      const li = this.doc.createElement('li');
      li.dataset.strategyId = entry.id;
      li.dataset.tooltip = entry.description;
      li.textContent = this.state.legendExpanded.strategies
        ? `${entry.name}: ${entry.description}`
        : entry.name;
      strategyList.appendChild(li);
    }
    const strategyToggle = this.doc.createElement('button');
    strategyToggle.id = 'legend-strategy-toggle';
    strategyToggle.dataset.legend = 'strategies';
    strategyToggle.textContent = this.state.legendExpanded.strategies
      ? 'collapse'
      : 'expand';

    this.legendHost.append(clashList, clashToggle, strategyList, strategyToggle);
  }

  private handleFrom(el: Element): InteractionHandle | null {
    const kind = el.getAttribute('data-target-kind');
    const id = el.getAttribute('data-target-id');
    if (!kind || !id) return null;
    return { targetKind: kind as TargetKind, targetId: id };
  }

  private closestTarget(ev: Event): Element | null {
    const start = ev.target as Element | null;
    return start?.closest?.('[data-target-kind]') ?? null;
  }

  private onClick(ev: Event): void {
    const legendButton = (ev.target as Element | null)?.closest?.(
      'button[data-legend]',
    );
    if (legendButton) {
      void this.dispatch({
        type: 'toggleLegend',
        legend: legendButton.getAttribute('data-legend') as
          | 'clashPoints'
          | 'strategies',
      });
      return;
    }
    const target = this.closestTarget(ev);
    if (!target) return;
    const handle = this.handleFrom(target);
    if (!handle) return;
    // chords select their clash point rather than the disagreement itself
    if (handle.targetKind === 'disagreement') {
      const clashId = target.getAttribute('data-clashpointid');
      if (!clashId) return;
      void this.dispatch({
        type: 'select',
        handle: { targetKind: 'clashPoint', targetId: clashId },
      });
      return;
    }
    void this.dispatch({ type: 'select', handle });
  }

  private onHover(ev: Event): void {
    const el = (ev.target as Element | null)?.closest?.(
      '[data-tooltip], [data-target-kind]',
    );
    if (!el) {
      this.hideTooltip();
      return;
    }
    const text = this.tooltipText(el);
    if (!text) {
      this.hideTooltip();
      return;
    }
    this.tooltip.hidden = false;
    this.tooltip.textContent = text;
    const handle = this.handleFrom(el);
    if (handle) {
      void this.dispatch({ type: 'hover', handle });
    }
  }

  private hideTooltip(): void {
    this.tooltip.hidden = true;
    if (this.state.hover) {
      void this.dispatch({ type: 'hover', handle: null });
    }
  }

  private tooltipText(el: Element): string {
    const direct = el.getAttribute('data-tooltip');
    if (direct) return direct;
    const strategyId = el.getAttribute('data-strategyid');
    if (strategyId) {
      const entry = this.lastProcess?.meta.legend.strategies.find(
        (s) => s.id === strategyId,
      );
      if (entry) return `${entry.name}: ${entry.description}`;
    }
    const handle = this.handleFrom(el);
    if (handle?.targetKind === 'clashPoint') {
      const entry = this.lastProcess?.meta.legend.clashPoints.find(
        (c) => c.id === handle.targetId,
      );
      if (entry) return entry.label;
    }
    return handle ? `${handle.targetKind} ${handle.targetId}` : '';
  }

  /** Rendered chord count across the process scene host (bicolor = 1). */
  chordElementCount(): number {
    return this.sceneHost.querySelectorAll('[data-kind="chord"]').length;
  }
}
