/**
 * Schema-driven attribute code editor.
 *
 * The form is built entirely from the schema the service publishes, so
 * the only symbols a user can produce are ones the server will accept.
 * Single-valued slots render as a dropdown with an explicit wildcard
 * entry; multi-valued slots render as token checkboxes plus a wildcard
 * checkbox, where checking nothing means the slot's "no features" token.
 * A live preview shows the canonical string as it is composed, and a
 * round trip through the server's parser confirms both sides agree
 * before the code is saved onto the sighting.
 */

import {
  type HerdbookClient,
  type ParseEcho,
  type SeekSchema,
  type SchemaSlot,
  type Sighting,
} from "./api.js";

interface SlotControl {
  slot: SchemaSlot;
  value(): string;
}

function singleControl(slot: SchemaSlot, wildcard: string, onInput: () => void): {
  control: SlotControl;
  element: HTMLElement;
} {
  const wrap = document.createElement("label");
  wrap.className = "slot slot-single";
  wrap.dataset.slot = slot.name;
  wrap.textContent = slot.name + " ";
  const select = document.createElement("select");
  select.className = "slot-value";
  const any = document.createElement("option");
  any.value = wildcard;
  any.textContent = `${wildcard} (unknown)`;
  select.append(any);
  for (const value of slot.values) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value;
    select.append(option);
  }
  select.addEventListener("change", onInput);
  wrap.append(select);
  return { control: { slot, value: () => select.value }, element: wrap };
}

function multiControl(slot: SchemaSlot, wildcard: string, onInput: () => void): {
  control: SlotControl;
  element: HTMLElement;
} {
  const none = slot.none ?? "";
  const wrap = document.createElement("fieldset");
  wrap.className = "slot slot-multi";
  wrap.dataset.slot = slot.name;
  const legend = document.createElement("legend");
  legend.textContent = slot.name;
  wrap.append(legend);

  const unknown = document.createElement("input");
  unknown.type = "checkbox";
  unknown.className = "slot-wildcard";
  // a fresh form claims nothing: unknown until the reviewer says otherwise
  unknown.checked = true;
  const unknownLabel = document.createElement("label");
  unknownLabel.append(unknown, ` ${wildcard} (unknown)`);
  wrap.append(unknownLabel);

  const tokens: HTMLInputElement[] = [];
  for (const value of slot.values) {
    if (value === none) continue;
    const box = document.createElement("input");
    box.type = "checkbox";
    box.className = "slot-token";
    box.value = value;
    box.addEventListener("change", () => {
      if (box.checked) unknown.checked = false;
      onInput();
    });
    const label = document.createElement("label");
    label.append(box, ` ${value}`);
    wrap.append(label);
    tokens.push(box);
  }
  unknown.addEventListener("change", () => {
    if (unknown.checked) for (const box of tokens) box.checked = false;
    onInput();
  });

  const value = (): string => {
    if (unknown.checked) return wildcard;
    const picked = tokens.filter((box) => box.checked).map((box) => box.value);
    if (picked.length === 0) return none;
    return [...new Set(picked)].sort().join("+");
  };
  return { control: { slot, value }, element: wrap };
}

export class SeekFormView {
  readonly root: HTMLElement;
  private controls: SlotControl[] = [];
  private preview: HTMLElement;
  private echoBox: HTMLElement;
  private status: HTMLElement;
  private schema: SeekSchema | null = null;
  private sighting: Sighting | null = null;

  constructor(
    readonly client: HerdbookClient,
    readonly sightingId: string,
  ) {
    this.root = document.createElement("div");
    this.root.className = "seek-form";
    this.preview = document.createElement("code");
    this.preview.className = "code-preview";
    this.echoBox = document.createElement("pre");
    this.echoBox.className = "parse-echo";
    this.status = document.createElement("p");
    this.status.className = "status";
  }

  async load(): Promise<void> {
    this.schema = await this.client.schema();
    this.sighting = await this.client.sighting(this.sightingId);
    this.render();
  }

  /** Canonical code string composed from the current form inputs. */
  currentCode(): string {
    return this.controls.map((c) => c.value()).join(":");
  }

  private render(): void {
    this.root.textContent = "";
    this.controls = [];
    const schema = this.schema!;

    const heading = document.createElement("h2");
    heading.textContent = `Code ${this.sightingId}`;
    this.root.append(heading);

    const refresh = () => {
      this.preview.textContent = this.currentCode();
      this.echoBox.textContent = "";
    };
    for (const slot of schema.slots) {
      const made = slot.multi
        ? multiControl(slot, schema.wildcard, refresh)
        : singleControl(slot, schema.wildcard, refresh);
      this.controls.push(made.control);
      this.root.append(made.element);
    }

    const previewLabel = document.createElement("p");
    previewLabel.append("canonical: ", this.preview);
    this.root.append(previewLabel);

    const check = document.createElement("button");
    check.type = "button";
    check.className = "check-code";
    check.textContent = "Check with server";
    check.addEventListener("click", () => void this.check());

    const save = document.createElement("button");
    save.type = "button";
    save.className = "save-code";
    save.textContent = "Save code";
    save.addEventListener("click", () => void this.save());

    this.root.append(check, save, this.echoBox, this.status);
    refresh();
  }

  async check(): Promise<ParseEcho> {
    const echo = await this.client.parseCode(this.currentCode());
    this.echoBox.textContent = JSON.stringify(echo, null, 2);
    return echo;
  }

  async save(): Promise<Sighting> {
    const updated = await this.client.setCode(
      this.sightingId,
      this.currentCode(),
      this.sighting!.version,
    );
    this.sighting = updated;
    this.status.textContent = `saved as ${updated.seek_code}`;
    return updated;
  }
}
