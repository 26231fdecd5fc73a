import { readFileSync } from 'node:fs';
import { join } from 'node:path';

import { ApiClient } from '../src/api';

export function apiBase(): string {
  // cwd is the package root when vitest runs; global setup writes this file
  return readFileSync(join(process.cwd(), 'tests', '.api-base'), 'utf-8').trim();
}

export function liveClient(): ApiClient {
  return new ApiClient(apiBase());
}

export async function waitFor(
  cond: () => boolean,
  ms = 8000,
  step = 20,
): Promise<void> {
  const deadline = Date.now() + ms;
  while (!cond()) {
    if (Date.now() > deadline) throw new Error('waitFor timed out');
    await new Promise((r) => setTimeout(r, step));
  }
}

export function click(el: Element): void {
  el.dispatchEvent(
    new (el.ownerDocument!.defaultView!.MouseEvent)('click', {
      bubbles: true,
      cancelable: true,
    }),
  );
}

export function hover(el: Element): void {
  el.dispatchEvent(
    new (el.ownerDocument!.defaultView!.MouseEvent)('mouseover', {
      bubbles: true,
      cancelable: true,
    }),
  );
}
