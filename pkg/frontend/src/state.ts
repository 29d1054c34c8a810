/**
 * Session state holder. The server is the single source of truth: every
 * toggle is sent to the service and the returned session (including its
 * preview string) replaces local state wholesale. A refresh re-fetches the
 * same state from the session id.
 */

import { ApiClient, SearchResponse, SessionView, Toggle } from './api.js';

export type SearchStatus =
  | { kind: 'idle' }
  | { kind: 'loading' }
  | { kind: 'results'; response: SearchResponse; backend: 'local' | 'web' }
  | { kind: 'error'; message: string };

export class SessionStateStore {
  private session_: SessionView | null = null;
  private search_: SearchStatus = { kind: 'idle' };
  private listeners: Array<() => void> = [];

  constructor(private readonly api: ApiClient) {}

  get session(): SessionView | null {
    return this.session_;
  }

  get searchStatus(): SearchStatus {
    return this.search_;
  }

  /** The string shown in the enriched-query preview: exactly the server's
   * serialization, never locally recomputed. */
  get preview(): string {
    return this.session_?.preview ?? '';
  }

  get hasCandidates(): boolean {
    return (this.session_?.groups ?? []).some((g) => g.candidates.length > 0);
  }

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  private replace(session: SessionView): void {
    this.session_ = session;
    this.notify();
  }

  async expand(text: string, withEnrichment: boolean): Promise<SessionView> {
    const session = withEnrichment
      ? await this.api.expand(text)
      : await this.api.expandDisabled(text);
    this.search_ = { kind: 'idle' };
    this.replace(session);
    return session;
  }

  async refresh(): Promise<void> {
    if (!this.session_) return;
    this.replace(await this.api.session(this.session_.session_id));
  }

  /** Optimistic flip, then reconcile to whatever the server acknowledges;
   * a failed request restores server state via refresh. */
  async toggle(candidateId: string, selected: boolean): Promise<void> {
    if (!this.session_) return;
    for (const group of this.session_.groups) {
      for (const candidate of group.candidates) {
        if (candidate.id === candidateId) candidate.selected = selected;
      }
    }
    this.notify();
    const toggles: Toggle[] = [{ candidate_id: candidateId, selected }];
    try {
      this.replace(await this.api.select(this.session_.session_id, toggles));
    } catch (error) {
      await this.refresh();
      throw error;
    }
  }

  async setGroup(groupIndex: number, selected: boolean): Promise<void> {
    if (!this.session_) return;
    this.replace(await this.api.selectGroup(this.session_.session_id, groupIndex, selected));
  }

  async search(backend: 'local' | 'web', k: number): Promise<void> {
    if (!this.session_) return;
    this.search_ = { kind: 'loading' };
    this.notify();
    try {
      const response = await this.api.search(this.session_.session_id, backend, k);
      this.search_ = { kind: 'results', response, backend };
    } catch (error) {
      // Selection state is untouched: retry reuses the same session.
      this.search_ = { kind: 'error', message: error instanceof Error ? error.message : String(error) };
    }
    this.notify();
  }
}
