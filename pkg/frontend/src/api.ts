/**
 * Typed client for the query-expansion service. The UI talks to the
 * service exclusively through these endpoints; it never touches the
 * databases directly.
 */

export interface TokenView {
  surface: string;
  normalized: string;
  position: number;
}

export interface CandidateView {
  id: string;
  term: string;
  relation: 'synonym' | 'hypernym' | 'hyponym';
  weight: number;
  source_lemma: string;
  synset_id: string;
  gloss: string | null;
  selected: boolean;
}

export interface GroupView {
  original: TokenView;
  candidates: CandidateView[];
}

export interface SessionView {
  session_id: string;
  text: string;
  groups: GroupView[];
  /** Server-rendered boolean query for the current selection; the UI
   * displays this string verbatim and never recomputes it locally. */
  preview: string;
}

export interface ResultView {
  doc_id: string;
  score: number;
  rank: number;
  snippet: string | null;
  title?: string;
}

export interface SearchResponse {
  results: ResultView[];
  query: string;
}

export interface HealthView {
  status: string;
  synsets: number;
  words: number;
  lexicon_entries: number;
  stopwords: number;
  documents: number;
}

export interface Toggle {
  candidate_id: string;
  selected: boolean;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly field?: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<never> {
  let message = `HTTP ${response.status}`;
  let field: string | undefined;
  try {
    const body = (await response.json()) as { error?: { message?: string; field?: string } };
    if (body.error?.message) message = body.error.message;
    field = body.error?.field;
  } catch {
    /* non-JSON error body; keep the status text */
  }
  throw new ApiError(response.status, message, field);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async post<T>(path: string, payload: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(payload),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  health(): Promise<HealthView> {
    return this.get('/health');
  }

  expand(text: string, config?: Record<string, unknown>): Promise<SessionView> {
    return this.post('/expand', config ? { text, config } : { text });
  }

  /** The no-enrichment path: an empty relation set creates a session with
   * zero candidates, so no candidate panel appears and search runs on the
   * baseline query. */
  expandDisabled(text: string): Promise<SessionView> {
    return this.expand(text, { relations_enabled: [] });
  }

  session(sessionId: string): Promise<SessionView> {
    return this.get(`/sessions/${sessionId}`);
  }

  select(sessionId: string, toggles: Toggle[]): Promise<SessionView> {
    return this.post(`/sessions/${sessionId}/select`, { toggles });
  }

  selectGroup(sessionId: string, group: number, selected: boolean): Promise<SessionView> {
    return this.post(`/sessions/${sessionId}/select`, { group, selected });
  }

  search(sessionId: string, backend: 'local' | 'web', k: number): Promise<SearchResponse> {
    return this.post(`/sessions/${sessionId}/search`, { backend, k });
  }
}
