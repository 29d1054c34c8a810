/**
 * Browser bootstrap: wires the rendered fragments to the service client.
 * All decision logic lives in state.ts; this file only moves strings
 * between the DOM and the store.
 */

import { ApiClient } from './api.js';
import { renderCandidatePanel, renderQueryScreen, renderResultsView } from './render.js';
import { SessionStateStore } from './state.js';

const SERVICE_URL =
  new URLSearchParams(window.location.search).get('service') ?? 'http://127.0.0.1:8091';

const api = new ApiClient(SERVICE_URL);
const store = new SessionStateStore(api);

const screenHost = document.getElementById('screen')!;
const panelHost = document.getElementById('panel')!;
const resultsHost = document.getElementById('results-host')!;

let queryText = '';

function renderAll(): void {
  screenHost.innerHTML = renderQueryScreen(queryText);
  panelHost.innerHTML =
    store.session && store.hasCandidates ? renderCandidatePanel(store.session) : '';
  resultsHost.innerHTML = renderResultsView(store.searchStatus);
  wire();
}

function wire(): void {
  const input = document.getElementById('query-input') as HTMLInputElement | null;
  input?.addEventListener('input', () => {
    queryText = input.value;
    const empty = !queryText.trim();
    (document.getElementById('expand-btn') as HTMLButtonElement).disabled = empty;
    (document.getElementById('plain-search-btn') as HTMLButtonElement).disabled = empty;
  });

  document.getElementById('query-form')?.addEventListener('submit', (event) => {
    event.preventDefault();
    if (!queryText.trim()) return;
    void store.expand(queryText, true).then(renderAll);
  });

  document.getElementById('plain-search-btn')?.addEventListener('click', () => {
    if (!queryText.trim()) return;
    void store
      .expand(queryText, false)
      .then(() => store.search('local', 10))
      .then(renderAll);
  });

  panelHost.querySelectorAll<HTMLInputElement>('input[data-toggle]').forEach((box) => {
    box.addEventListener('change', () => {
      void store.toggle(box.dataset.toggle!, box.checked).then(renderAll);
    });
  });
  panelHost.querySelectorAll<HTMLButtonElement>('button[data-group-all]').forEach((btn) => {
    btn.addEventListener('click', () => {
      void store.setGroup(Number(btn.dataset.groupAll), true).then(renderAll);
    });
  });
  panelHost.querySelectorAll<HTMLButtonElement>('button[data-group-none]').forEach((btn) => {
    btn.addEventListener('click', () => {
      void store.setGroup(Number(btn.dataset.groupNone), false).then(renderAll);
    });
  });

  // The results host is rebuilt every render, so the retry button's
  // listener never accumulates.
  document.getElementById('retry-search')?.addEventListener('click', () => {
    void store.search('local', 10).then(renderAll);
  });
}

const searchButton = document.createElement('button');
searchButton.id = 'search-btn';
searchButton.textContent = 'ابحث';
searchButton.addEventListener('click', () => {
  void store.search('local', 10).then(renderAll);
});
document.getElementById('actions')?.appendChild(searchButton);

renderAll();
