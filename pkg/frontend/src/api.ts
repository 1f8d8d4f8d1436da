/**
 * Typed client for the herdbook HTTP API.
 *
 * Every method returns the server's JSON verbatim; nothing is recomputed
 * or massaged on this side, so displayed values always equal API values.
 */

export interface SchemaSlot {
  name: string;
  values: string[];
  multi?: boolean;
  none?: string;
}

export interface SeekSchema {
  format: string;
  version: string;
  wildcard: string;
  slots: SchemaSlot[];
}

export interface ParseEcho {
  canonical: string;
  slots: Record<string, string>;
  wildcard_count: number;
}

export interface GroupSighting {
  id: string;
  event_ref: string;
  timestamp: string;
  latitude: number | null;
  longitude: number | null;
  status: string;
  version: number;
}

export interface Box {
  id: string;
  photo: string;
  x: number;
  y: number;
  w: number;
  h: number;
  subgroup_index: number;
}

export interface Photo {
  id: string;
  group_sighting: string;
  content_hash: string;
  width: number;
  height: number;
  version: number;
  preview_url: string;
  original_url: string;
  boxes?: Box[];
}

export interface Sighting {
  id: string;
  group_sighting: string;
  subgroup_index: number;
  seek_code: string | null;
  assigned_individual: string | null;
  version: number;
}

export interface GroupSightingDetail extends GroupSighting {
  photos: Photo[];
  sightings: Sighting[];
}

export interface GroupSightingPage {
  items: GroupSighting[];
  page: number;
  page_count: number;
  total: number;
}

export interface BoxDraft {
  x: number;
  y: number;
  w: number;
  h: number;
  subgroup_index: number;
}

export interface BoxSaveResult {
  boxes: Box[];
  photo_version: number;
  group_sighting: GroupSighting;
}

export interface MatchCandidate {
  individual_id: string;
  display_name: string;
  rank: number;
  seek_distance: number;
  contour_score: number;
  fused_score: number;
  preview_urls: string[];
}

export interface MatchResult {
  sighting: string;
  top_k: number;
  index_generation: number | null;
  index_stale: boolean;
  matches: MatchCandidate[];
  gallery_size: number;
  contour_evidence: boolean;
  create_new_individual: boolean;
  message?: string;
}

export interface Individual {
  id: string;
  display_name: string;
  version: number;
}

export interface AssignResult {
  individual: Individual;
  sighting: Sighting;
  created: boolean;
}

export interface Health {
  service: string;
  status: string;
  schema_version: string;
  index_generation: number | null;
  index_stale: boolean;
}

/** Error carrying the HTTP status so views can react to 409 conflicts. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorType: string,
    detail: string,
  ) {
    super(detail);
  }
}

export class HerdbookClient {
  constructor(
    readonly baseUrl: string,
    private readonly token: string,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    let payload: BodyInit | undefined;
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      payload = JSON.stringify(body);
    }
    return this.send(method, path, headers, payload);
  }

  private async send<T>(
    method: string,
    path: string,
    headers: Record<string, string>,
    payload?: BodyInit,
  ): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: { Authorization: `Bearer ${this.token}`, ...headers },
      body: payload,
    });
    if (!response.ok) {
      let errorType = "HttpError";
      let detail = `${response.status} on ${path}`;
      try {
        const parsed = await response.json();
        errorType = parsed.error ?? errorType;
        detail = parsed.detail ?? detail;
      } catch {
        // non-JSON error body; keep the defaults
      }
      throw new ApiError(response.status, errorType, detail);
    }
    return (await response.json()) as T;
  }

  health(): Promise<Health> {
    return this.request("GET", "/api/health");
  }

  schema(): Promise<SeekSchema> {
    return this.request("GET", "/api/schema");
  }

  parseCode(code: string): Promise<ParseEcho> {
    return this.request("POST", "/api/schema/parse", { code });
  }

  createGroupSighting(
    eventRef: string,
    timestamp: string,
    latitude: number,
    longitude: number,
  ): Promise<GroupSighting> {
    return this.request("POST", "/api/group-sightings", {
      event_ref: eventRef,
      timestamp,
      latitude,
      longitude,
    });
  }

  groupSighting(gsId: string): Promise<GroupSightingDetail> {
    return this.request("GET", `/api/group-sightings/${gsId}`);
  }

  listGroupSightings(page = 1, pageSize = 50): Promise<GroupSightingPage> {
    return this.request(
      "GET",
      `/api/group-sightings?page=${page}&page_size=${pageSize}`,
    );
  }

  uploadPhoto(
    gsId: string,
    filename: string,
    data: Uint8Array | ArrayBuffer,
    mediaType = "image/png",
  ): Promise<Photo> {
    // multipart assembled by hand: test DOMs pair a non-native FormData
    // with the engine's native fetch, which stalls serializing it, and
    // raw bytes behave identically in real browsers
    const bytes = data instanceof Uint8Array ? data : new Uint8Array(data);
    const boundary = "herdbook-" + Math.random().toString(36).slice(2);
    const encoder = new TextEncoder();
    const head = encoder.encode(
      `--${boundary}\r\n` +
        `Content-Disposition: form-data; name="file"; filename="${filename}"\r\n` +
        `Content-Type: ${mediaType}\r\n\r\n`,
    );
    const tail = encoder.encode(`\r\n--${boundary}--\r\n`);
    const body = new Uint8Array(head.length + bytes.length + tail.length);
    body.set(head, 0);
    body.set(bytes, head.length);
    body.set(tail, head.length + bytes.length);
    return this.send(
      "POST",
      `/api/group-sightings/${gsId}/photos`,
      { "Content-Type": `multipart/form-data; boundary=${boundary}` },
      body,
    );
  }

  saveBoxes(
    photoId: string,
    boxes: BoxDraft[],
    expectedVersion: number | null,
  ): Promise<BoxSaveResult> {
    return this.request("PUT", `/api/photos/${photoId}/boxes`, {
      boxes,
      expected_version: expectedVersion,
    });
  }

  derive(gsId: string): Promise<{ sightings: Sighting[]; group_sighting: GroupSighting }> {
    return this.request("POST", `/api/group-sightings/${gsId}/derive`);
  }

  sighting(isId: string): Promise<Sighting & { contours: unknown[] }> {
    return this.request("GET", `/api/sightings/${isId}`);
  }

  setCode(isId: string, code: string, expectedVersion: number | null): Promise<Sighting> {
    return this.request("PUT", `/api/sightings/${isId}/code`, {
      code,
      expected_version: expectedVersion,
    });
  }

  addContour(
    isId: string,
    side: "left" | "right",
    points: number[][],
  ): Promise<{ id: string; sighting_version: number }> {
    return this.request("POST", `/api/sightings/${isId}/contours`, {
      side,
      points,
    });
  }

  match(isId: string, topK = 15): Promise<MatchResult> {
    return this.request("GET", `/api/sightings/${isId}/match?top_k=${topK}`);
  }

  assign(
    isId: string,
    target: { individualId: string } | { displayName: string },
  ): Promise<AssignResult> {
    const body =
      "individualId" in target
        ? { individual_id: target.individualId }
        : { display_name: target.displayName };
    return this.request("POST", `/api/sightings/${isId}/assign`, body);
  }

  individuals(): Promise<{ items: Individual[]; total: number }> {
    return this.request("GET", "/api/individuals");
  }

  rebuildIndex(): Promise<{ generation: number | null; size: number }> {
    return this.request("POST", "/api/index/rebuild");
  }

  feedSync(): Promise<{
    created: string[];
    duplicates: string[];
    invalid: string[];
    counts: Record<string, number>;
  }> {
    return this.request("POST", "/api/feed/sync", {});
  }

  /** Absolute URL for an API-relative resource path like a preview_url. */
  resolve(path: string): string {
    return this.baseUrl + path;
  }
}
