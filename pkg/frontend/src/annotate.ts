/**
 * Two-pane bounding-box annotation screen.
 *
 * Both panes edit one shared buffer keyed by photo id, so two panes
 * showing the same photo always display the same boxes. Drawing and
 * corner-handle resizing happen in image coordinates, clamped to the
 * photo bounds; saving sends the whole box set per photo with the last
 * seen version token, and a conflict (someone else saved first)
 * surfaces a reload prompt instead of silently overwriting.
 */

import {
  ApiError,
  type BoxDraft,
  type HerdbookClient,
  type Photo,
} from "./api.js";
import { previewImage, zoomButton } from "./images.js";

export const PANE_WIDTH = 480;
const MIN_BOX_PX = 3;

interface PhotoBuffer {
  photo: Photo;
  boxes: BoxDraft[];
  version: number;
  dirty: boolean;
}

function clamp(value: number, low: number, high: number): number {
  return Math.min(Math.max(value, low), high);
}

class Pane {
  readonly root: HTMLElement;
  private selected: string | null = null;
  private canvas: HTMLElement | null = null;
  private draft: { x0: number; y0: number; box: BoxDraft } | null = null;
  private resizing: BoxDraft | null = null;

  constructor(
    private readonly view: AnnotateView,
    private readonly label: string,
  ) {
    this.root = document.createElement("section");
    this.root.className = "annotate-pane";
    this.root.dataset.pane = label;
  }

  get photoId(): string | null {
    return this.selected;
  }

  select(photoId: string | null): void {
    this.selected = photoId;
    this.render();
  }

  render(): void {
    this.root.textContent = "";
    const picker = document.createElement("select");
    picker.className = "photo-picker";
    const blank = document.createElement("option");
    blank.value = "";
    blank.textContent = `pane ${this.label}: pick a photo`;
    picker.append(blank);
    for (const buffer of this.view.buffers()) {
      const option = document.createElement("option");
      option.value = buffer.photo.id;
      option.textContent = buffer.photo.id;
      option.selected = buffer.photo.id === this.selected;
      picker.append(option);
    }
    picker.addEventListener("change", () => {
      this.select(picker.value || null);
    });
    this.root.append(picker);

    if (this.selected === null) return;
    const buffer = this.view.buffer(this.selected);
    if (buffer === undefined) return;

    const scale = PANE_WIDTH / buffer.photo.width;
    const canvas = document.createElement("div");
    canvas.className = "box-canvas";
    canvas.style.position = "relative";
    canvas.style.width = `${PANE_WIDTH}px`;
    canvas.style.height = `${Math.round(buffer.photo.height * scale)}px`;
    this.canvas = canvas;

    const img = previewImage(this.view.client, buffer.photo);
    img.style.width = "100%";
    img.draggable = false;
    canvas.append(img);

    buffer.boxes.forEach((box, index) => {
      canvas.append(this.boxElement(buffer, box, index, scale));
    });

    canvas.addEventListener("mousedown", (ev) => this.startDraw(ev, buffer, scale));
    canvas.addEventListener("mousemove", (ev) => this.moveDraw(ev, buffer, scale));
    canvas.addEventListener("mouseup", () => this.endDraw(buffer));

    this.root.append(canvas);
    this.root.append(zoomButton(this.view.client, img, buffer.photo));
  }

  private boxElement(
    buffer: PhotoBuffer,
    box: BoxDraft,
    index: number,
    scale: number,
  ): HTMLElement {
    const el = document.createElement("div");
    el.className = "box";
    el.dataset.subgroup = String(box.subgroup_index);
    el.style.position = "absolute";
    el.style.left = `${box.x * scale}px`;
    el.style.top = `${box.y * scale}px`;
    el.style.width = `${box.w * scale}px`;
    el.style.height = `${box.h * scale}px`;

    const number = document.createElement("input");
    number.type = "number";
    number.min = "1";
    number.className = "subgroup-number";
    number.value = String(box.subgroup_index);
    number.addEventListener("change", () => {
      const parsed = Number.parseInt(number.value, 10);
      if (Number.isFinite(parsed) && parsed >= 1) {
        box.subgroup_index = parsed;
        this.view.markDirty(buffer);
      }
    });
    number.addEventListener("mousedown", (ev) => ev.stopPropagation());

    const remove = document.createElement("button");
    remove.type = "button";
    remove.className = "box-delete";
    remove.textContent = "x";
    remove.addEventListener("mousedown", (ev) => ev.stopPropagation());
    remove.addEventListener("click", () => {
      buffer.boxes.splice(index, 1);
      this.view.markDirty(buffer);
    });

    const handle = document.createElement("div");
    handle.className = "box-resize";
    handle.style.position = "absolute";
    handle.style.right = "0";
    handle.style.bottom = "0";
    handle.style.width = "10px";
    handle.style.height = "10px";
    handle.addEventListener("mousedown", (ev) => {
      // grabbing the corner must not start a fresh box underneath
      ev.stopPropagation();
      this.resizing = box;
    });

    el.append(number, remove, handle);
    return el;
  }

  private canvasPoint(ev: MouseEvent, scale: number): { x: number; y: number } {
    const rect = this.canvas!.getBoundingClientRect();
    return {
      x: (ev.clientX - rect.left) / scale,
      y: (ev.clientY - rect.top) / scale,
    };
  }

  private startDraw(ev: MouseEvent, buffer: PhotoBuffer, scale: number): void {
    if (this.canvas === null) return;
    const point = this.canvasPoint(ev, scale);
    const x = clamp(point.x, 0, buffer.photo.width);
    const y = clamp(point.y, 0, buffer.photo.height);
    const next =
      buffer.boxes.reduce((top, b) => Math.max(top, b.subgroup_index), 0) + 1;
    this.draft = {
      x0: x,
      y0: y,
      box: { x, y, w: 0, h: 0, subgroup_index: next },
    };
  }

  private moveDraw(ev: MouseEvent, buffer: PhotoBuffer, scale: number): void {
    if (this.resizing !== null) {
      const point = this.canvasPoint(ev, scale);
      const box = this.resizing;
      // the dragged corner stays inside the photo and past the origin
      box.w = clamp(point.x, box.x, buffer.photo.width) - box.x;
      box.h = clamp(point.y, box.y, buffer.photo.height) - box.y;
      return;
    }
    if (this.draft === null) return;
    const point = this.canvasPoint(ev, scale);
    // clamp the moving corner so boxes can never leave the photo
    const x = clamp(point.x, 0, buffer.photo.width);
    const y = clamp(point.y, 0, buffer.photo.height);
    const box = this.draft.box;
    box.x = Math.min(this.draft.x0, x);
    box.y = Math.min(this.draft.y0, y);
    box.w = Math.abs(x - this.draft.x0);
    box.h = Math.abs(y - this.draft.y0);
  }

  private endDraw(buffer: PhotoBuffer): void {
    const scale = PANE_WIDTH / buffer.photo.width;
    if (this.resizing !== null) {
      const box = this.resizing;
      this.resizing = null;
      box.w = Math.max(box.w, MIN_BOX_PX / scale);
      box.h = Math.max(box.h, MIN_BOX_PX / scale);
      this.view.markDirty(buffer);
      return;
    }
    if (this.draft === null) return;
    const box = this.draft.box;
    this.draft = null;
    if (box.w * scale < MIN_BOX_PX || box.h * scale < MIN_BOX_PX) return;
    buffer.boxes.push(box);
    this.view.markDirty(buffer);
  }
}

export class AnnotateView {
  readonly root: HTMLElement;
  private readonly state = new Map<string, PhotoBuffer>();
  private readonly panes: [Pane, Pane];
  private status: HTMLElement;
  private inflight: Promise<void> = Promise.resolve();

  constructor(
    readonly client: HerdbookClient,
    readonly gsId: string,
  ) {
    this.root = document.createElement("div");
    this.root.className = "annotate-view";
    this.panes = [new Pane(this, "A"), new Pane(this, "B")];
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

  buffers(): PhotoBuffer[] {
    return [...this.state.values()];
  }

  buffer(photoId: string): PhotoBuffer | undefined {
    return this.state.get(photoId);
  }

  async load(): Promise<void> {
    const detail = await this.client.groupSighting(this.gsId);
    this.state.clear();
    for (const photo of detail.photos) {
      this.state.set(photo.id, {
        photo,
        boxes: (photo.boxes ?? []).map((b) => ({
          x: b.x,
          y: b.y,
          w: b.w,
          h: b.h,
          subgroup_index: b.subgroup_index,
        })),
        version: photo.version,
        dirty: false,
      });
    }
    this.render();
  }

  markDirty(buffer: PhotoBuffer): void {
    buffer.dirty = true;
    this.refreshPanes(buffer.photo.id);
    this.setStatus("unsaved changes");
  }

  /** Redraw every pane that shows the given photo, keeping them in sync. */
  private refreshPanes(photoId: string): void {
    for (const pane of this.panes) {
      if (pane.photoId === photoId) pane.render();
    }
  }

  private setStatus(text: string): void {
    this.status.textContent = text;
  }

  private render(): void {
    this.root.textContent = "";
    const heading = document.createElement("h2");
    heading.textContent = `Annotate ${this.gsId}`;
    const save = document.createElement("button");
    save.type = "button";
    save.className = "save-boxes";
    save.textContent = "Save boxes";
    save.addEventListener("click", () => this.run(() => this.save()));

    const upload = document.createElement("input");
    upload.type = "file";
    upload.accept = "image/*";
    upload.className = "photo-upload";
    upload.addEventListener("change", () => {
      const file = upload.files?.[0];
      if (file) this.run(() => this.uploadPhoto(file));
    });

    this.root.append(heading, save, upload, this.status);

    const panes = document.createElement("div");
    panes.className = "panes";
    for (const pane of this.panes) {
      pane.render();
      panes.append(pane.root);
    }
    this.root.append(panes);
  }

  async uploadPhoto(file: File): Promise<void> {
    const data = await file.arrayBuffer();
    await this.client.uploadPhoto(
      this.gsId,
      file.name,
      data,
      file.type || "image/png",
    );
    await this.load();
    this.setStatus(`uploaded ${file.name}`);
  }

  async save(): Promise<void> {
    for (const buffer of this.state.values()) {
      if (!buffer.dirty) continue;
      try {
        const saved = await this.client.saveBoxes(
          buffer.photo.id,
          buffer.boxes,
          buffer.version,
        );
        buffer.boxes = saved.boxes.map((b) => ({
          x: b.x,
          y: b.y,
          w: b.w,
          h: b.h,
          subgroup_index: b.subgroup_index,
        }));
        buffer.version = saved.photo_version;
        buffer.dirty = false;
        this.refreshPanes(buffer.photo.id);
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          this.showConflict(buffer, err);
          return;
        }
        throw err;
      }
    }
    this.setStatus("saved");
  }

  private showConflict(buffer: PhotoBuffer, err: ApiError): void {
    this.setStatus(`conflict on ${buffer.photo.id}: ${err.message}`);
    const reload = document.createElement("button");
    reload.type = "button";
    reload.className = "reload-prompt";
    reload.textContent = "Reload latest";
    reload.addEventListener("click", () => this.run(() => this.load()));
    this.status.append(" ", reload);
  }
}
