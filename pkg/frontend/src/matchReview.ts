/**
 * Match review screen: ranked candidates for one coded sighting.
 *
 * Candidate rows show the server's scores exactly as returned, never
 * recomputed or rounded client-side, so what the reviewer sees is what
 * the ranking actually used. Confirming a row assigns the sighting to
 * that individual; a name box creates a new individual instead. When
 * the gallery is empty the only offered action is create-new. Before
 * any decision is posted the service's health is consulted: if the
 * descriptor index generation moved since the match list was fetched,
 * the decision is held back and a reload is offered, because the list
 * on screen no longer reflects the index that would serve it today.
 */

import {
  type AssignResult,
  type HerdbookClient,
  type MatchCandidate,
  type MatchResult,
} from "./api.js";
import { previewFromUrl } from "./images.js";

function scoreCell(cls: string, label: string, value: number): HTMLElement {
  const cell = document.createElement("span");
  cell.className = cls;
  cell.title = label;
  cell.textContent = String(value);
  return cell;
}

export class MatchReviewView {
  readonly root: HTMLElement;
  result: MatchResult | null = null;
  decision: AssignResult | null = null;
  private generationAtLoad: number | null = null;
  private status: HTMLElement;
  private stale: HTMLElement;
  private compareQuery: HTMLElement;
  private compareCandidate: HTMLElement;
  private queryPreviews: string[] = [];
  private inflight: Promise<void> = Promise.resolve();

  constructor(
    readonly client: HerdbookClient,
    readonly sightingId: string,
  ) {
    this.root = document.createElement("div");
    this.root.className = "match-review";
    this.status = document.createElement("p");
    this.status.className = "decision-status";
    this.stale = document.createElement("p");
    this.stale.className = "stale-notice";
    this.stale.hidden = true;
    this.compareQuery = document.createElement("div");
    this.compareQuery.className = "compare-query";
    this.compareCandidate = document.createElement("div");
    this.compareCandidate.className = "compare-candidate";
  }

  async load(): Promise<void> {
    const sighting = await this.client.sighting(this.sightingId);
    const detail = await this.client.groupSighting(sighting.group_sighting);
    this.queryPreviews = detail.photos.map((p) => p.preview_url);
    this.result = await this.client.match(this.sightingId);
    this.generationAtLoad = this.result.index_generation;
    this.stale.hidden = true;
    this.stale.textContent = "";
    this.render();
  }

  /** Wait for whatever button-initiated action is currently running. */
  settle(): Promise<void> {
    return this.inflight;
  }

  private run(action: () => Promise<unknown>): void {
    this.inflight = action().then(
      () => undefined,
      (err: unknown) => {
        this.status.textContent = err instanceof Error ? err.message : String(err);
      },
    );
  }

  private render(): void {
    this.root.textContent = "";
    const result = this.result!;

    const heading = document.createElement("h2");
    heading.textContent = `Review ${this.sightingId}`;
    this.root.append(heading, this.stale, this.status);

    if (result.message) {
      const note = document.createElement("p");
      note.className = "gallery-message";
      note.textContent = result.message;
      this.root.append(note);
    }

    if (!result.create_new_individual) {
      const list = document.createElement("ol");
      list.className = "match-list";
      for (const candidate of result.matches) {
        list.append(this.row(candidate));
      }
      this.root.append(list);

      const compare = document.createElement("div");
      compare.className = "compare-area";
      const left = document.createElement("div");
      left.append("this sighting", this.compareQuery);
      const right = document.createElement("div");
      right.append("candidate", this.compareCandidate);
      compare.append(left, right);
      this.root.append(compare);
    }

    const name = document.createElement("input");
    name.type = "text";
    name.className = "new-name";
    name.placeholder = "new individual name";
    const create = document.createElement("button");
    create.type = "button";
    create.className = "create-new";
    create.textContent = "Create new individual";
    create.addEventListener("click", () => {
      const text = name.value.trim();
      if (text) this.run(() => this.createNew(text));
    });
    this.root.append(name, create);
  }

  private row(candidate: MatchCandidate): HTMLElement {
    const row = document.createElement("li");
    row.className = "match-row";
    row.dataset.individualId = candidate.individual_id;

    const title = document.createElement("strong");
    title.className = "candidate-name";
    title.textContent = `#${candidate.rank} ${candidate.display_name}`;
    row.append(
      title,
      scoreCell("seek-distance", "attribute distance", candidate.seek_distance),
      scoreCell("contour-score", "contour score", candidate.contour_score),
      scoreCell("fused-score", "fused score", candidate.fused_score),
    );

    const strip = document.createElement("div");
    strip.className = "preview-strip";
    for (const url of candidate.preview_urls) {
      strip.append(previewFromUrl(this.client, url));
    }
    row.append(strip);

    const compare = document.createElement("button");
    compare.type = "button";
    compare.className = "compare-match";
    compare.textContent = "Compare";
    compare.addEventListener("click", () => this.compare(candidate));

    const confirm = document.createElement("button");
    confirm.type = "button";
    confirm.className = "confirm-match";
    confirm.textContent = "Confirm";
    confirm.addEventListener("click", () => {
      this.run(() => this.confirm(candidate.individual_id));
    });
    row.append(compare, confirm);
    return row;
  }

  compare(candidate: MatchCandidate): void {
    this.compareQuery.textContent = "";
    for (const url of this.queryPreviews) {
      this.compareQuery.append(previewFromUrl(this.client, url));
    }
    this.compareCandidate.textContent = "";
    this.compareCandidate.dataset.individualId = candidate.individual_id;
    for (const url of candidate.preview_urls) {
      this.compareCandidate.append(previewFromUrl(this.client, url));
    }
  }

  /** True when the index moved since load; shows the notice and blocks. */
  private async indexMoved(): Promise<boolean> {
    const health = await this.client.health();
    if (health.index_generation === this.generationAtLoad) return false;
    this.stale.hidden = false;
    this.stale.textContent =
      "the match index changed while you were reviewing; reload before deciding";
    const reload = document.createElement("button");
    reload.type = "button";
    reload.className = "reload-matches";
    reload.textContent = "Reload matches";
    reload.addEventListener("click", () => this.run(() => this.load()));
    this.stale.append(" ", reload);
    return true;
  }

  async confirm(individualId: string): Promise<AssignResult | null> {
    if (await this.indexMoved()) return null;
    const assigned = await this.client.assign(this.sightingId, { individualId });
    this.decision = assigned;
    this.status.textContent = `assigned to ${assigned.individual.display_name}`;
    return assigned;
  }

  async createNew(displayName: string): Promise<AssignResult | null> {
    if (await this.indexMoved()) return null;
    const assigned = await this.client.assign(this.sightingId, { displayName });
    this.decision = assigned;
    this.status.textContent = `created ${assigned.individual.display_name}`;
    return assigned;
  }
}
