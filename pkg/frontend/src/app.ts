/**
 * Hash-routed shell tying the screens together.
 *
 * An empty hash lands on the group sighting list with both intake
 * paths; #/annotate/<group sighting id>, #/code/<sighting id> and
 * #/review/<sighting id> open the work screens. The header carries a
 * low-bandwidth toggle that stops preview images from loading eagerly;
 * full-resolution originals are only ever fetched from an explicit
 * zoom press.
 */

import { HerdbookClient } from "./api.js";
import { AnnotateView } from "./annotate.js";
import { HomeView } from "./home.js";
import { SeekFormView } from "./seekForm.js";
import { MatchReviewView } from "./matchReview.js";
import { isLowBandwidth, setLowBandwidth } from "./images.js";

export interface AppConfig {
  baseUrl: string;
  token: string;
}

export class App {
  readonly root: HTMLElement;
  readonly client: HerdbookClient;
  private outlet: HTMLElement;
  current: AnnotateView | SeekFormView | MatchReviewView | HomeView | null =
    null;

  constructor(config: AppConfig) {
    this.client = new HerdbookClient(config.baseUrl, config.token);
    this.root = document.createElement("div");
    this.root.className = "app";
    this.outlet = document.createElement("main");
    this.root.append(this.header(), this.outlet);
  }

  private header(): HTMLElement {
    const bar = document.createElement("header");
    const title = document.createElement("strong");
    title.textContent = "herdbook";

    const toggle = document.createElement("input");
    toggle.type = "checkbox";
    toggle.className = "low-bandwidth-toggle";
    toggle.checked = isLowBandwidth();
    toggle.addEventListener("change", () => setLowBandwidth(toggle.checked));
    const label = document.createElement("label");
    label.append(toggle, " low bandwidth");

    bar.append(title, label);
    return bar;
  }

  /** Route a location hash like "#/review/IS0001" to its screen. */
  async route(hash: string): Promise<void> {
    const parts = hash.replace(/^#\/?/, "").split("/");
    const [screen, id] = parts;
    this.outlet.textContent = "";
    this.current = null;
    if (!screen) {
      this.current = new HomeView(this.client);
      await this.current.load();
      this.outlet.append(this.current.root);
      return;
    }
    if (!id) {
      const hint = document.createElement("p");
      hint.textContent = "open #/annotate/<GS>, #/code/<IS> or #/review/<IS>";
      this.outlet.append(hint);
      return;
    }
    if (screen === "annotate") {
      this.current = new AnnotateView(this.client, id);
    } else if (screen === "code") {
      this.current = new SeekFormView(this.client, id);
    } else if (screen === "review") {
      this.current = new MatchReviewView(this.client, id);
    } else {
      const missing = document.createElement("p");
      missing.textContent = `unknown screen ${screen}`;
      this.outlet.append(missing);
      return;
    }
    await this.current.load();
    this.outlet.append(this.current.root);
  }

  /** Mount into a document and follow its hash changes. */
  attach(target: HTMLElement, window: Window): void {
    target.append(this.root);
    window.addEventListener("hashchange", () => {
      void this.route(window.location.hash);
    });
    void this.route(window.location.hash);
  }
}
