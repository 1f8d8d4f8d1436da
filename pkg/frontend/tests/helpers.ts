/** Shared seeding utilities for the browser tests. */

import { inject } from "vitest";
import { HerdbookClient, type Photo, type Sighting } from "../src/api.js";
import { solidPng } from "./png.js";
import { ADMIN_TOKEN } from "./service.js";

export function testClient(url?: string): HerdbookClient {
  return new HerdbookClient(url ?? inject("herdbookUrl"), ADMIN_TOKEN);
}

let counter = 0;

/** Reference unique across the whole run so event ingestion never collides. */
export function uniqueRef(prefix: string): string {
  counter += 1;
  return `${prefix}-${Date.now()}-${counter}-${Math.random().toString(36).slice(2, 8)}`;
}

/** A fresh 640x480 PNG with a color no earlier call produced. */
export function nextPng(): Uint8Array {
  counter += 1;
  return solidPng(640, 480, [
    (counter * 37) % 256,
    (counter * 91) % 256,
    (counter * 53) % 256,
  ]);
}

export interface Seeded {
  gsId: string;
  photo: Photo;
  sighting: Sighting;
}

/** One group sighting with one photo, one box, derived to one sighting. */
export async function seedSighting(client: HerdbookClient): Promise<Seeded> {
  const gs = await client.createGroupSighting(
    uniqueRef("EV-WEB"),
    "2026-03-01T08:00:00+00:00",
    -2.1,
    34.7,
  );
  const photo = await client.uploadPhoto(gs.id, "cam.png", nextPng());
  await client.saveBoxes(
    photo.id,
    [{ x: 40, y: 40, w: 400, h: 300, subgroup_index: 1 }],
    photo.version,
  );
  const derived = await client.derive(gs.id);
  return { gsId: gs.id, photo, sighting: derived.sightings[0] };
}

export interface Notch {
  center: number;
  width: number;
  depth: number;
}

/** Half-ellipse ear outline with triangular notches cut into it. */
export function earOutline(notches: Notch[], n = 256): number[][] {
  const points: number[][] = [];
  for (let i = 0; i < n; i++) {
    const t = (Math.PI * i) / (n - 1);
    let r = 1.0;
    for (const notch of notches) {
      const d = Math.abs(t - notch.center);
      if (d < notch.width) r -= notch.depth * (1 - d / notch.width);
    }
    points.push([r * Math.cos(t), 0.6 * r * Math.sin(t)]);
  }
  return points;
}

/** Code a fresh sighting, give it a contour, and register it as a new individual. */
export async function seedIndividual(
  client: HerdbookClient,
  name: string,
  code: string,
  notches: Notch[],
): Promise<string> {
  const seeded = await seedSighting(client);
  await client.setCode(seeded.sighting.id, code, seeded.sighting.version);
  await client.addContour(seeded.sighting.id, "left", earOutline(notches));
  const assigned = await client.assign(seeded.sighting.id, { displayName: name });
  return assigned.individual.id;
}

/** A coded, unassigned query sighting ready for match review. */
export async function seedQuery(
  client: HerdbookClient,
  code: string,
): Promise<Seeded> {
  const seeded = await seedSighting(client);
  const coded = await client.setCode(
    seeded.sighting.id,
    code,
    seeded.sighting.version,
  );
  return { ...seeded, sighting: coded };
}
