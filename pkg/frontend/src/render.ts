/**
 * Pure HTML renderers. Each returns a markup string from view data, so
 * layout and bidi handling can be snapshot-tested without a browser.
 *
 * Arabic phrases are emitted inside <bdi> with first-strong isolates, and
 * every mixed-direction container carries an explicit dir attribute, so a
 * term like "(فرس OR خيل)" can never reorder its operators.
 */

import { GroupView, ResultView, SessionView } from './api.js';
import { dirFor, isolate } from './rtl.js';
import { SearchStatus } from './state.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function bdi(text: string): string {
  return `<bdi dir="${dirFor(text)}">${escapeHtml(isolate(text))}</bdi>`;
}

const RELATION_LABELS: Record<string, string> = {
  synonym: 'مرادف',
  hypernym: 'تعميم',
  hyponym: 'تخصيص',
};

export function renderQueryScreen(text: string): string {
  const disabled = text.trim() ? '' : ' disabled';
  return [
    '<form id="query-form" dir="rtl">',
    `  <input id="query-input" dir="rtl" type="text" value="${escapeHtml(text)}"`,
    '         placeholder="اكتب استفسارك هنا" autocomplete="off">',
    `  <button id="expand-btn" type="submit"${disabled}>توسيع الاستفسار</button>`,
    `  <button id="plain-search-btn" type="button"${disabled}>بحث بدون توسيع</button>`,
    '</form>',
  ].join('\n');
}

function renderCandidate(candidate: {
  id: string;
  term: string;
  relation: string;
  weight: number;
  gloss: string | null;
  selected: boolean;
}): string {
  const checked = candidate.selected ? ' checked' : '';
  const gloss = candidate.gloss ? `<span class="gloss">${bdi(candidate.gloss)}</span>` : '';
  return [
    `<li class="candidate" data-candidate="${candidate.id}">`,
    `  <label><input type="checkbox" data-toggle="${candidate.id}"${checked}>`,
    `  ${bdi(candidate.term)}</label>`,
    `  <span class="badge badge-${candidate.relation}">` +
      `${RELATION_LABELS[candidate.relation] ?? candidate.relation}</span>`,
    `  <span class="weight">${candidate.weight.toFixed(2)}</span>`,
    `  ${gloss}`,
    '</li>',
  ].join('\n');
}

function renderGroup(group: GroupView, index: number): string {
  // Candidates grouped by sense (synset) under each source term.
  const senses = new Map<string, typeof group.candidates>();
  for (const candidate of group.candidates) {
    const bucket = senses.get(candidate.synset_id) ?? [];
    bucket.push(candidate);
    senses.set(candidate.synset_id, bucket);
  }
  const senseBlocks = [...senses.entries()]
    .map(
      ([synsetId, candidates]) =>
        `<ul class="sense" data-synset="${escapeHtml(synsetId)}">\n` +
        candidates.map(renderCandidate).join('\n') +
        '\n</ul>',
    )
    .join('\n');
  return [
    `<section class="group" data-group="${index}" dir="rtl">`,
    `  <h3>${bdi(group.original.surface)}</h3>`,
    `  <button data-group-all="${index}">تحديد الكل</button>`,
    `  <button data-group-none="${index}">إلغاء الكل</button>`,
    senseBlocks || '<p class="empty">لا توجد مقترحات</p>',
    '</section>',
  ].join('\n');
}

export function renderCandidatePanel(session: SessionView): string {
  const groups = session.groups.map(renderGroup).join('\n');
  return [
    '<div id="candidate-panel">',
    groups,
    '  <h4>الاستفسار الموسع</h4>',
    // The preview is the server-rendered serialization, shown verbatim as
    // plaintext so its internal order is the string's own.
    `  <code id="preview" dir="ltr">${escapeHtml(session.preview)}</code>`,
    '</div>',
  ].join('\n');
}

export function renderResultsView(status: SearchStatus): string {
  switch (status.kind) {
    case 'idle':
      return '<div id="results"></div>';
    case 'loading':
      return '<div id="results"><p class="loading">جار البحث…</p></div>';
    case 'error':
      return [
        '<div id="results">',
        `  <div class="error-banner" dir="rtl">${bdi('تعذر تنفيذ البحث')}` +
          `<span class="detail" dir="ltr">${escapeHtml(status.message)}</span>` +
          '<button id="retry-search">إعادة المحاولة</button></div>',
        '</div>',
      ].join('\n');
    case 'results': {
      const badge = status.backend === 'local' ? 'محلي' : 'ويب';
      if (status.response.results.length === 0) {
        return [
          '<div id="results" dir="rtl">',
          `  <span class="backend-badge">${badge}</span>`,
          '  <p class="empty-state">لا توجد نتائج لهذا الاستفسار</p>',
          '</div>',
        ].join('\n');
      }
      const rows = status.response.results.map((r) => renderResultRow(r)).join('\n');
      return [
        '<div id="results" dir="rtl">',
        `  <span class="backend-badge">${badge}</span>`,
        '  <ol class="result-list">',
        rows,
        '  </ol>',
        '</div>',
      ].join('\n');
    }
  }
}

function renderResultRow(result: ResultView): string {
  const title = result.title ? `<strong>${bdi(result.title)}</strong> ` : '';
  const snippet = result.snippet ? bdi(result.snippet) : '';
  return [
    `<li class="result" value="${result.rank}">`,
    `  ${title}<span class="doc-id" dir="ltr">${escapeHtml(result.doc_id)}</span>`,
    `  <span class="score">${result.score.toFixed(4)}</span>`,
    `  <p class="snippet">${snippet}</p>`,
    '</li>',
  ].join('\n');
}
