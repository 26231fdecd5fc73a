/**
 * Linked-interaction checks on a live fixture server: legend filtering and
 * block selection with coordinated highlights and card auto-scroll.
 */
import { beforeEach, describe, expect, it, vi } from 'vitest';

import { ConchApp } from '../src/app';
import type { ClashPointRecord } from '../src/types';
import { click, hover, liveClient, waitFor } from './helpers';

let app: ConchApp;
let clashPoints: ClashPointRecord[];
const scrollSpy = vi.fn();

beforeEach(async () => {
  document.body.textContent = '';
  // jsdom has no scrollIntoView; the app feature-detects it
  (
    Element.prototype as Element & { scrollIntoView: typeof scrollSpy }
  ).scrollIntoView = scrollSpy;
  scrollSpy.mockClear();

  const root = document.createElement('div');
  document.body.appendChild(root);
  const api = liveClient();
  clashPoints = await api.clashPoints();
  app = new ConchApp(root, api);
  await app.init();
});

describe('clash-point legend linkage', () => {
  it('clicking a legend entry reduces chords to that clash point count', async () => {
    const target = clashPoints.find((c) => c.interactionCount > 0)!;
    const fullCount = app.chordElementCount();
    expect(fullCount).toBeGreaterThan(target.interactionCount);

    const entry = app.legendHost.querySelector(
      `#legend-clash-points li[data-target-id="${target.id}"]`,
    )!;
    click(entry);
    await waitFor(() => app.chordElementCount() === target.interactionCount);

    expect(app.chordElementCount()).toBe(target.interactionCount);
    const chords = app.sceneHost.querySelectorAll('[data-kind="chord"]');
    for (const chord of Array.from(chords)) {
      expect(chord.getAttribute('data-clashpointid')).toBe(target.id);
      expect(chord.getAttribute('data-colormode')).toBe('clashColor');
    }
  });

  it('clicking the active entry again restores the unfiltered view', async () => {
    const target = clashPoints.find((c) => c.interactionCount > 0)!;
    const fullCount = app.chordElementCount();
    const priorState = JSON.stringify(app.state);

    const selector = `#legend-clash-points li[data-target-id="${target.id}"]`;
    click(app.legendHost.querySelector(selector)!);
    await waitFor(() => app.chordElementCount() === target.interactionCount);

    click(app.legendHost.querySelector(selector)!);
    await waitFor(() => app.chordElementCount() === fullCount);

    expect(JSON.stringify(app.state)).toBe(priorState);
  });

  it('every clash point yields its exact interaction count', async () => {
    for (const cp of clashPoints) {
      await app.dispatch({
        type: 'select',
        handle: { targetKind: 'clashPoint', targetId: cp.id },
      });
      expect(app.chordElementCount()).toBe(cp.interactionCount);
      await app.dispatch({ type: 'deselect' });
    }
  });
});

describe('block selection linkage', () => {
  function anyBlockId(): string {
    const subArc = app.sceneHost.querySelector(
      '[data-kind="spiralStroke"][data-target-id]',
    )!;
    return subArc.getAttribute('data-target-id')!;
  }

  it('clicking a spiral sub-arc scrolls its card to the top', async () => {
    const blockId = anyBlockId();
    click(
      app.sceneHost.querySelector(
        `[data-kind="spiralStroke"][data-target-id="${blockId}"]`,
      )!,
    );
    await waitFor(() => scrollSpy.mock.calls.length > 0);

    expect(scrollSpy).toHaveBeenCalledWith({ block: 'start' });
    const card = app.sceneHost.querySelector(`[id="card-${blockId}"]`)!;
    expect(card.classList.contains('scroll-target')).toBe(true);
    const scrolled = scrollSpy.mock.contexts[0] as Element;
    expect(scrolled.getAttribute('id')).toBe(`card-${blockId}`);
  });

  it('highlights the sub-arc and its strategy units together', async () => {
    const blockId = anyBlockId();
    await app.dispatch({
      type: 'select',
      handle: { targetKind: 'block', targetId: blockId },
    });

    const subArc = app.sceneHost.querySelector(
      `[id="subarc-${blockId}"]`,
    )!;
    expect(subArc.getAttribute('class')).toContain('highlighted');

    const units = app.strategyHost.querySelectorAll(
      `[data-kind="rect"][data-target-id="${blockId}"]`,
    );
    const { card } = await app.api.blockCard(blockId);
    const taggedUnits = card.runs.reduce(
      (n, run) => n + run.strategyIds.length,
      0,
    );
    expect(units.length).toBe(taggedUnits);
    for (const unit of Array.from(units)) {
      expect(unit.getAttribute('class')).toContain('highlighted');
    }

    const highlights = new Set<string>();
    for (const el of Array.from(
      app.sceneHost.querySelectorAll('.highlighted[data-target-kind="block"]'),
    )) {
      highlights.add(el.getAttribute('data-target-id')!);
    }
    expect(highlights).toEqual(new Set([blockId]));
  });

  it('deselecting a block restores the prior scene exactly', async () => {
    const blockId = anyBlockId();
    const before = app.sceneHost.innerHTML;
    await app.dispatch({
      type: 'select',
      handle: { targetKind: 'block', targetId: blockId },
    });
    expect(app.sceneHost.innerHTML).not.toBe(before);
    await app.dispatch({ type: 'deselect' });
    expect(app.sceneHost.innerHTML).toBe(before);
  });
});

describe('tooltips and legends', () => {
  it('hovering a strategy legend entry shows its description', () => {
    const entry = app.legendHost.querySelector(
      '#legend-strategies li[data-tooltip]',
    )!;
    hover(entry);
    expect(app.tooltip.hidden).toBe(false);
    expect(app.tooltip.textContent).toBe(
      entry.getAttribute('data-tooltip'),
    );
  });

  it('hovering a strategy icon shows the catalog description', async () => {
    const icon = app.strategyHost.querySelector(
      '[data-kind="icon"][data-strategyid]',
    );
    if (!icon) return; // fixture may have no icon boxes; nothing to assert
    hover(icon);
    expect(app.tooltip.hidden).toBe(false);
    expect(app.tooltip.textContent).toMatch(/: /);
  });

  it('expanding the clash legend reveals disagreement viewpoints', async () => {
    click(app.legendHost.querySelector('#legend-clash-toggle')!);
    await waitFor(
      () =>
        app.legendHost.querySelectorAll('.disagreement-entry').length > 0,
    );
    const entries = app.legendHost.querySelectorAll('.disagreement-entry');
    const total = clashPoints.reduce(
      (n, cp) => n + cp.disagreements.length,
      0,
    );
    expect(entries.length).toBe(total);
    expect(entries[0].textContent).toMatch(/.+: .+ \/ .+/);
  });

  it('stale selections warn and keep the current state', async () => {
    const warn = vi.spyOn(console, 'warn').mockImplementation(() => {});
    const priorState = JSON.stringify(app.state);
    const priorScene = app.sceneHost.innerHTML;
    await app.dispatch({
      type: 'select',
      handle: { targetKind: 'block', targetId: 'gone-block' },
    });
    expect(warn).toHaveBeenCalledOnce();
    expect(JSON.stringify(app.state)).toBe(priorState);
    expect(app.sceneHost.innerHTML).toBe(priorScene);
    warn.mockRestore();
  });
});
