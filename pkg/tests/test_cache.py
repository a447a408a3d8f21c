import json

from harmonica import cache
from harmonica.spaces import (
    clear_registry,
    coinvariants,
    harmonics,
    hook_component,
)


def fresh(n=2):
    clear_registry()
    return coinvariants(n)


class TestRoundTrip:
    def test_quotient_space(self, tmp_path):
        dr = coinvariants(3)
        cache.save_quotient(tmp_path, dr)
        loaded = cache.load_quotient(tmp_path, "drn", 3)
        assert loaded is not None
        assert loaded.hilbert() == dr.hilbert()
        for deg in dr.blocks:
            a, b = dr.blocks[deg], loaded.blocks[deg]
            assert a.reps == b.reps and a.nf == b.nf

    def test_graded_subspace(self, tmp_path):
        dh = harmonics(3)
        cache.save_subspace(tmp_path, dh)
        loaded = cache.load_subspace(tmp_path, "dh", 3)
        assert loaded is not None and loaded.hilbert() == dh.hilbert()
        for deg in dh.support():
            assert loaded.basis(deg) == dh.basis(deg)

    def test_hook_space_via_build_api(self, tmp_path):
        clear_registry()
        first = hook_component(2, cache_dir=tmp_path)
        assert cache.cache_path(tmp_path, "hook", 2).is_file()
        clear_registry()
        second = hook_component(2, cache_dir=tmp_path)
        assert second.hilbert() == first.hilbert()
        for deg in first.blocks:
            assert second.blocks[deg].nf == first.blocks[deg].nf


class TestStaleness:
    def test_version_mismatch_ignored(self, tmp_path):
        dr = coinvariants(2)
        path = cache.save_quotient(tmp_path, dr)
        payload = json.loads(path.read_text())
        payload["format"] = 999
        path.write_text(json.dumps(payload))
        assert cache.load_quotient(tmp_path, "drn", 2) is None

    def test_order_mismatch_ignored(self, tmp_path):
        dr = coinvariants(2)
        path = cache.save_quotient(tmp_path, dr)
        payload = json.loads(path.read_text())
        payload["order"] = "some-other-order"
        path.write_text(json.dumps(payload))
        assert cache.load_quotient(tmp_path, "drn", 2) is None

    def test_corrupt_file_ignored(self, tmp_path):
        dr = coinvariants(2)
        path = cache.save_quotient(tmp_path, dr)
        path.write_text("{not valid json")
        assert cache.load_quotient(tmp_path, "drn", 2) is None

    def test_missing_file(self, tmp_path):
        assert cache.load_quotient(tmp_path, "drn", 4) is None

    def test_no_temp_files_left_behind(self, tmp_path):
        cache.save_quotient(tmp_path, coinvariants(2))
        cache.save_subspace(tmp_path, harmonics(2))
        leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
        assert leftovers == []
