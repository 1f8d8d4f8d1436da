/**
 * Landing screen: the group sighting list plus both intake paths,
 * pulling events from the configured feed or recording one by hand.
 * Each row links to the annotation screen for that group sighting.
 */

import type { GroupSightingPage, HerdbookClient } from "./api.js";

const LIST_PAGE_SIZE = 200;

function defaultTimestamp(): string {
  return new Date().toISOString().replace(/\.\d{3}Z$/, "+00:00");
}

export class HomeView {
  readonly root: HTMLElement;
  private status: HTMLElement;
  private inflight: Promise<void> = Promise.resolve();

  constructor(readonly client: HerdbookClient) {
    this.root = document.createElement("div");
    this.root.className = "home-view";
    this.status = document.createElement("p");
    this.status.className = "status";
  }

  /** Wait for whatever button-initiated action is currently running. */
  settle(): Promise<void> {
    return this.inflight;
  }

  private run(action: () => Promise<unknown>): void {
    this.inflight = action().then(
      () => undefined,
      (err: unknown) => {
        this.setStatus(err instanceof Error ? err.message : String(err));
      },
    );
  }

  private setStatus(text: string): void {
    this.status.textContent = text;
  }

  async load(): Promise<void> {
    const page = await this.client.listGroupSightings(1, LIST_PAGE_SIZE);
    this.render(page);
  }

  private render(page: GroupSightingPage): void {
    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = "Group sightings";
    const hint = document.createElement("p");
    hint.className = "route-hint";
    hint.textContent =
      "screens: #/annotate/<GS> for boxes, #/code/<IS> for codes, " +
      "#/review/<IS> for matches";
    this.root.append(heading, hint, this.status);
    this.root.append(this.intakeControls(), this.listing(page));
  }

  private intakeControls(): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "intake";

    const sync = document.createElement("button");
    sync.type = "button";
    sync.className = "feed-sync";
    sync.textContent = "Pull events from feed";
    sync.addEventListener("click", () => this.run(() => this.syncFeed()));

    const form = document.createElement("fieldset");
    form.className = "manual-intake";
    const legend = document.createElement("legend");
    legend.textContent = "record an event by hand";
    const ref = this.textInput("event-ref", "event reference");
    const time = this.textInput("event-time", "timestamp");
    time.value = defaultTimestamp();
    const lat = this.textInput("event-lat", "latitude");
    const lon = this.textInput("event-lon", "longitude");
    const create = document.createElement("button");
    create.type = "button";
    create.className = "create-gs";
    create.textContent = "Create group sighting";
    create.addEventListener("click", () =>
      this.run(() => this.createManual(ref, time, lat, lon)),
    );
    form.append(legend, ref, time, lat, lon, create);

    wrap.append(sync, form);
    return wrap;
  }

  private textInput(className: string, placeholder: string): HTMLInputElement {
    const input = document.createElement("input");
    input.type = "text";
    input.className = className;
    input.placeholder = placeholder;
    return input;
  }

  private async syncFeed(): Promise<void> {
    const result = await this.client.feedSync();
    await this.load();
    this.setStatus(
      `feed sync: ${result.created.length} created, ` +
        `${result.duplicates.length} duplicates, ${result.invalid.length} invalid`,
    );
  }

  private async createManual(
    ref: HTMLInputElement,
    time: HTMLInputElement,
    lat: HTMLInputElement,
    lon: HTMLInputElement,
  ): Promise<void> {
    if (!ref.value.trim() || !time.value.trim()) {
      this.setStatus("event reference and timestamp are required");
      return;
    }
    if (!lat.value.trim() || !lon.value.trim()) {
      this.setStatus("latitude and longitude are required");
      return;
    }
    const latitude = Number(lat.value);
    const longitude = Number(lon.value);
    if (!Number.isFinite(latitude) || !Number.isFinite(longitude)) {
      this.setStatus("latitude and longitude must be numbers");
      return;
    }
    const gs = await this.client.createGroupSighting(
      ref.value.trim(),
      time.value.trim(),
      latitude,
      longitude,
    );
    await this.load();
    this.setStatus(`created ${gs.id}`);
  }

  private listing(page: GroupSightingPage): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "gs-listing";
    const total = document.createElement("p");
    total.className = "gs-total";
    total.textContent = `${page.total} group sightings`;

    const table = document.createElement("table");
    table.className = "gs-table";
    const head = document.createElement("tr");
    for (const label of ["id", "event", "time", "status"]) {
      const th = document.createElement("th");
      th.textContent = label;
      head.append(th);
    }
    table.append(head);

    for (const gs of page.items) {
      const row = document.createElement("tr");
      row.dataset.gsId = gs.id;
      const idCell = document.createElement("td");
      const link = document.createElement("a");
      link.className = "open-annotate";
      link.href = `#/annotate/${gs.id}`;
      link.textContent = gs.id;
      idCell.append(link);
      row.append(idCell);
      for (const text of [gs.event_ref, gs.timestamp, gs.status]) {
        const cell = document.createElement("td");
        cell.textContent = text;
        row.append(cell);
      }
      table.append(row);
    }

    wrap.append(total, table);
    return wrap;
  }
}
