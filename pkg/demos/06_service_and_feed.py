"""Live service demo: event feed intake through match review over HTTP.

Starts the mock event feed and the review service as real processes on
free ports, then drives the whole intake path with an HTTP client. Cleans
up after itself.
"""
import io
import json
import socket
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import httpx
import numpy as np
from PIL import Image

from herdbook.ingest import sighting_fixture
from herdbook.synth import make_ear_contour, random_notch_pattern


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def wait_for(url):
    for _ in range(100):
        try:
            httpx.get(url, timeout=2.0)
            return
        except httpx.TransportError:
            time.sleep(0.1)
    raise SystemExit(f"no response from {url}")


def png(color):
    buf = io.BytesIO()
    Image.new("RGB", (640, 480), color).save(buf, format="PNG")
    return buf.getvalue()


feed_port, api_port = free_port(), free_port()
workdir = Path(tempfile.mkdtemp(prefix="herdbook_demo_"))

fixtures = workdir / "events.json"
fixtures.write_text(json.dumps([
    sighting_fixture("FEED-EV-1", "2026-05-02T06:10:00+00:00", reporter="patrol-3"),
]))
config = workdir / "service.json"
config.write_text(json.dumps({
    "db_path": str(workdir / "demo.db"),
    "photo_root": str(workdir / "photos"),
    "users": [{"token": "demo-token", "user": "demo", "role": "Admin"}],
    "feed": {"base_url": f"http://127.0.0.1:{feed_port}"},
}))

feed = subprocess.Popen(
    [sys.executable, "-m", "herdbook.cli", "mock-feed",
     "--fixtures", str(fixtures), "--port", str(feed_port)],
    stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
)
service = subprocess.Popen(
    [sys.executable, "-m", "herdbook.cli", "serve",
     "--config", str(config), "--port", str(api_port)],
    stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
)

try:
    wait_for(f"http://127.0.0.1:{feed_port}/api/events")
    wait_for(f"http://127.0.0.1:{api_port}/api/health")
    client = httpx.Client(
        base_url=f"http://127.0.0.1:{api_port}",
        headers={"Authorization": "Bearer demo-token"},
        timeout=20.0,
    )
    print(f"feed on :{feed_port}, service on :{api_port}")
    print("health:", client.get("/api/health").json()["status"])

    # Pull the feed; the pending event becomes a group sighting.
    sync = client.post("/api/feed/sync", json={}).json()
    gs_id = sync["created"][0]
    print(f"feed sync created {gs_id}; second sync finds"
          f" {len(client.post('/api/feed/sync', json={}).json()['duplicates'])} duplicate")

    # Photo, box, derive, code, trace.
    r = client.post(
        f"/api/group-sightings/{gs_id}/photos",
        files={"file": ("p1.png", png((140, 120, 100)), "image/png")},
    )
    photo_id = r.json()["id"]
    client.put(f"/api/photos/{photo_id}/boxes", json={"boxes": [
        {"x": 60, "y": 40, "w": 260, "h": 320, "subgroup_index": 1},
    ]})
    sighting = client.post(f"/api/group-sightings/{gs_id}/derive").json()["sightings"][0]
    is_id = sighting["id"]
    print(f"photo {photo_id} boxed, derived sighting {is_id}")

    echoed = client.post("/api/schema/parse", json={"code": "F:AD:*:N2:U:U:U:X0"}).json()
    print(f"schema parse echo: {echoed['canonical']} ({echoed['wildcard_count']} wildcard)")
    client.put(f"/api/sightings/{is_id}/code", json={"code": echoed["canonical"]})

    rng = np.random.default_rng(5)
    trace = make_ear_contour(rng, pattern=random_notch_pattern(rng, 2), jitter=0.01)
    client.post(f"/api/sightings/{is_id}/contours", json={
        "side": "right",
        "points": [[float(x), float(y)] for x, y in trace.points],
    })

    # First animal ever: the match endpoint says to create a new individual.
    match = client.get(f"/api/sightings/{is_id}/match").json()
    print(f"match: gallery_size={match['gallery_size']},"
          f" create_new_individual={match['create_new_individual']}")
    assigned = client.post(f"/api/sightings/{is_id}/assign",
                           json={"display_name": "Neema"}).json()
    print(f"assigned to new individual {assigned['individual']['id']}"
          f" ({assigned['individual']['display_name']})")

    client.post("/api/index/rebuild")
    print("index generation:", client.get("/api/health").json()["index_generation"])
    print("individuals on file:", client.get("/api/individuals").json()["total"])
finally:
    service.terminate()
    feed.terminate()
    service.wait(timeout=10)
    feed.wait(timeout=10)
    print(f"\nprocesses stopped; working files under {workdir}")
