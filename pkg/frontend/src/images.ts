/**
 * Image loading policy.
 *
 * Previews are the only thing views embed on their own. Full-resolution
 * originals load exclusively through an explicit zoom action, and
 * low-bandwidth mode additionally defers preview loading to the browser's
 * lazy strategy. Keeping every <img> creation here makes the policy
 * auditable: nothing else in the UI constructs image sources.
 */

import type { HerdbookClient, Photo } from "./api.js";

let lowBandwidth = false;

export function setLowBandwidth(on: boolean): void {
  lowBandwidth = on;
}

export function isLowBandwidth(): boolean {
  return lowBandwidth;
}

/** A preview-resolution <img> for a photo; never the original. */
export function previewImage(client: HerdbookClient, photo: Photo): HTMLImageElement {
  const img = document.createElement("img");
  img.className = "photo-preview";
  img.loading = lowBandwidth ? "lazy" : "eager";
  img.src = client.resolve(photo.preview_url);
  img.dataset.photoId = photo.id;
  return img;
}

/** A preview <img> from a bare URL (match candidates carry URLs only). */
export function previewFromUrl(client: HerdbookClient, url: string): HTMLImageElement {
  const img = document.createElement("img");
  img.className = "photo-preview";
  img.loading = lowBandwidth ? "lazy" : "eager";
  img.src = client.resolve(url);
  return img;
}

/**
 * Swap an already-mounted preview to the full-resolution original.
 * This is the single place the UI requests an original, and it only runs
 * from a user's zoom action.
 */
export function zoomToOriginal(
  client: HerdbookClient,
  img: HTMLImageElement,
  photo: Photo,
): void {
  img.src = client.resolve(photo.original_url);
  img.classList.add("zoomed");
}

/** A zoom button wired to load the original for the given image. */
export function zoomButton(
  client: HerdbookClient,
  img: HTMLImageElement,
  photo: Photo,
): HTMLButtonElement {
  const button = document.createElement("button");
  button.type = "button";
  button.className = "zoom-button";
  button.textContent = "zoom";
  button.addEventListener("click", () => zoomToOriginal(client, img, photo));
  return button;
}
