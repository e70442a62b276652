import json
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import pytest

from rankbench import builtin_catalog, save_catalog
from rankbench.api import RankApiServer

SIM2 = {"rnc": 0.24562, "fut": 0.16293, "avail": 0.03241, "elast": 0.02452, "srt": 0.53452}
UNIFORM = {"rnc": 0.2, "fut": 0.2, "avail": 0.2, "elast": 0.2, "srt": 0.2}


@pytest.fixture()
def server():
    srv = RankApiServer(("127.0.0.1", 0))
    srv.load()
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()


def request(srv, method, path, body=None):
    url = f"http://127.0.0.1:{srv.port}{path}"
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(url, data=data, method=method)
    if data:
        req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req, timeout=10) as resp:
            return resp.status, json.loads(resp.read().decode())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read().decode())


class TestCatalogEndpoints:
    def test_get_catalog(self, server):
        status, doc = request(server, "GET", "/api/v1/catalog")
        assert status == 200
        assert doc["revision"] == 1
        assert len(doc["catalog"]["services"]) == 3
        assert len(doc["catalog"]["criteria"]) == 5

    def test_get_scenarios(self, server):
        status, doc = request(server, "GET", "/api/v1/scenarios")
        assert status == 200
        assert [s["name"] for s in doc["scenarios"]] == ["sim1", "sim2", "sim3", "sim4"]
        assert doc["scenarios"][0]["cr"] == 0.0

    def test_unknown_route(self, server):
        status, doc = request(server, "GET", "/api/v1/nope")
        assert status == 404
        assert doc["code"] == "NotFound"

    def test_before_init_returns_503(self):
        srv = RankApiServer(("127.0.0.1", 0))  # no load()
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        try:
            status, doc = request(srv, "GET", "/api/v1/catalog")
            assert status == 503
            assert doc["code"] == "NotInitialized"
        finally:
            srv.shutdown()
            srv.server_close()


class TestRankEndpoint:
    def test_sim2_weights_rank_rf1_first(self, server):
        status, doc = request(server, "POST", "/api/v1/rank", {"weights": SIM2})
        assert status == 200
        assert doc["revision"] == 1
        for ranking in doc["rankings"]:
            assert ranking["entries"][0]["service"] == "RF1"
            assert ranking["entries"][0]["rank"] == 1
        assert doc["exact_rank_match"] is True

    def test_uniform_weights_deterministic_order(self, server):
        s1, d1 = request(server, "POST", "/api/v1/rank", {"weights": UNIFORM})
        s2, d2 = request(server, "POST", "/api/v1/rank", {"weights": UNIFORM})
        assert s1 == s2 == 200
        assert d1 == d2

    def test_bad_sum_reports_total(self, server):
        bad = dict(UNIFORM, srt=0.1)
        status, doc = request(server, "POST", "/api/v1/rank", {"weights": bad})
        assert status == 400
        assert doc["code"] == "SumNotOne"
        assert doc["field"] == "weights"
        assert "0.9" in doc["message"]

    def test_unknown_criterion_is_422(self, server):
        bad = dict(UNIFORM)
        bad["latency"] = bad.pop("srt")
        status, doc = request(server, "POST", "/api/v1/rank", {"weights": bad})
        assert status == 422
        assert doc["code"] == "UnknownCriterion"

    def test_missing_criterion_is_400(self, server):
        bad = {k: v for k, v in UNIFORM.items() if k != "srt"}
        status, doc = request(server, "POST", "/api/v1/rank", {"weights": bad})
        assert status == 400
        assert doc["code"] in ("MissingCriterion", "SumNotOne")

    def test_unknown_method_is_400(self, server):
        status, doc = request(
            server, "POST", "/api/v1/rank", {"weights": UNIFORM, "methods": ["TOPSIS"]}
        )
        assert status == 400
        assert doc["code"] == "UnknownMethod"
        assert doc["field"] == "methods"

    def test_single_method_request(self, server):
        status, doc = request(
            server, "POST", "/api/v1/rank", {"weights": UNIFORM, "methods": ["SAW"]}
        )
        assert status == 200
        assert [r["method"] for r in doc["rankings"]] == ["SAW"]
        assert doc["kendall_tau"] is None

    def test_non_json_body(self, server):
        url = f"http://127.0.0.1:{server.port}/api/v1/rank"
        req = urllib.request.Request(url, data=b"not json", method="POST")
        with pytest.raises(urllib.error.HTTPError) as exc:
            urllib.request.urlopen(req, timeout=10)
        assert exc.value.code == 400


class TestSweepEndpoint:
    def test_point_per_value_in_order(self, server):
        values = [round(0.01 + i * (0.89 / 20), 6) for i in range(21)]
        status, doc = request(
            server, "POST", "/api/v1/sweep",
            {"weights": SIM2, "criterion": "srt", "values": values},
        )
        assert status == 200
        assert [p["value"] for p in doc["points"]] == values
        assert all("comparison" in p for p in doc["points"])

    def test_invalid_point_is_error_entry(self, server):
        status, doc = request(
            server, "POST", "/api/v1/sweep",
            {"weights": SIM2, "criterion": "srt", "values": [0.5, 1.0]},
        )
        assert status == 200
        assert "comparison" in doc["points"][0]
        assert "error" in doc["points"][1]

    def test_rank_flip_across_oracle_threshold(self, server):
        # desk-oracle flip thresholds for 'rnc' from the sim1 base:
        # AHP 0.12052621730741494, SAW 0.14319649208672043
        sim1 = {"rnc": 0.47821, "fut": 0.35242, "avail": 0.04562,
                "elast": 0.05432, "srt": 0.06943}
        status, doc = request(
            server, "POST", "/api/v1/sweep",
            {"weights": sim1, "criterion": "rnc", "values": [0.10, 0.12, 0.14, 0.16]},
        )
        assert status == 200
        tops = {"AHP": [], "SAW": []}
        for p in doc["points"]:
            for ranking in p["comparison"]["rankings"]:
                tops[ranking["method"]].append(ranking["entries"][0]["service"])
        assert tops["AHP"] == ["RF3", "RF3", "RF2", "RF2"]
        assert tops["SAW"] == ["RF3", "RF3", "RF3", "RF2"]

    def test_invalid_base_weights_400(self, server):
        status, doc = request(
            server, "POST", "/api/v1/sweep",
            {"weights": {"rnc": 0.5}, "criterion": "rnc", "values": [0.5]},
        )
        assert status == 400

    def test_unknown_sweep_criterion_422(self, server):
        status, doc = request(
            server, "POST", "/api/v1/sweep",
            {"weights": SIM2, "criterion": "bogus", "values": [0.5]},
        )
        assert status == 422


class TestReload:
    def test_revision_increments_and_catalog_swaps(self, tmp_path):
        path = tmp_path / "cat.json"
        save_catalog(builtin_catalog(), path)
        srv = RankApiServer(("127.0.0.1", 0), catalog_path=str(path))
        srv.load()
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        try:
            status, doc = request(srv, "GET", "/api/v1/catalog")
            assert doc["revision"] == 1

            catalog = builtin_catalog()
            trimmed = catalog.restrict(["rnc", "srt"])
            save_catalog(trimmed, path)
            status, doc = request(srv, "POST", "/api/v1/reload", {})
            assert status == 200 and doc["revision"] == 2

            status, doc = request(srv, "GET", "/api/v1/catalog")
            assert doc["revision"] == 2
            assert [c["id"] for c in doc["catalog"]["criteria"]] == ["rnc", "srt"]
        finally:
            srv.shutdown()
            srv.server_close()

    def test_broken_file_reload_is_400_and_keeps_old_snapshot(self, tmp_path):
        path = tmp_path / "cat.json"
        save_catalog(builtin_catalog(), path)
        srv = RankApiServer(("127.0.0.1", 0), catalog_path=str(path))
        srv.load()
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        try:
            path.write_text("{broken")
            status, doc = request(srv, "POST", "/api/v1/reload", {})
            assert status == 400
            status, doc = request(srv, "GET", "/api/v1/catalog")
            assert status == 200 and doc["revision"] == 1
        finally:
            srv.shutdown()
            srv.server_close()


class TestConcurrency:
    def test_parallel_rank_requests_consistent(self, server):
        def one(_):
            return request(server, "POST", "/api/v1/rank", {"weights": SIM2})

        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(one, range(16)))
        statuses = {s for s, _ in results}
        bodies = [json.dumps(d, sort_keys=True) for _, d in results]
        assert statuses == {200}
        assert len(set(bodies)) == 1


class TestStaticUi:
    def test_serves_index_and_blocks_traversal(self, tmp_path):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<html><body>panel</body></html>")
        secret = tmp_path / "secret.txt"
        secret.write_text("keep out")
        srv = RankApiServer(("127.0.0.1", 0), ui_dir=str(ui))
        srv.load()
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        try:
            url = f"http://127.0.0.1:{srv.port}/"
            with urllib.request.urlopen(url, timeout=10) as resp:
                assert resp.status == 200
                assert b"panel" in resp.read()
            with pytest.raises(urllib.error.HTTPError) as exc:
                urllib.request.urlopen(
                    f"http://127.0.0.1:{srv.port}/../secret.txt", timeout=10
                )
            assert exc.value.code == 404
        finally:
            srv.shutdown()
            srv.server_close()
