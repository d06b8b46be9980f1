"""Acceptance: round-trip equality, published dimensions, split
disjointness, and clean verification of fresh conversions."""

import numpy as np

from dpconvert import read_matrix, write_matrix
from dpconvert.cli import main
from dpconvert.verify import verify

from _fixtures import make_awa2_source, make_cub_source


def report(name, passed, detail):
    print(f"\n{'PASS' if passed else 'FAIL'} {name}: {detail}")


class TestRoundTrip:
    def test_bitwise_equality(self, tmp_path):
        rng = np.random.default_rng(7)
        values = rng.uniform(-10, 10, size=(37, 53)).astype(np.float32)
        path = tmp_path / "m.dpm1"
        write_matrix(path, values)
        again = read_matrix(path)
        bitwise = np.array_equal(again.astype(np.float32).view(np.uint32),
                                 values.view(np.uint32))
        write_matrix(tmp_path / "m2.dpm1", again)
        stable = path.read_bytes() == (tmp_path / "m2.dpm1").read_bytes()
        report("round-trip", bitwise and stable,
               "read-back equals written values bitwise (f32), re-write stable")
        assert bitwise and stable

    def test_golden_bytes(self, tmp_path):
        # same fixture as the engine package: both sides pin one layout
        path = tmp_path / "g.dpm1"
        write_matrix(path, np.array([[1.0, -2.0, 0.5], [0.0, 3.25, -0.75]]))
        expected = (b"DPM1"
                    + (2).to_bytes(4, "little") + (3).to_bytes(4, "little")
                    + np.array([1.0, -2.0, 0.5, 0.0, 3.25, -0.75],
                               dtype="<f4").tobytes())
        assert path.read_bytes() == expected


class TestPublishedDimensions:
    def test_awa2(self, tmp_path):
        src = tmp_path / "src"
        make_awa2_source(src)
        out = tmp_path / "out"
        rc = main(["awa2", "--source", str(src), "--out", str(out)])
        features = read_matrix(out / "features.dpm1")
        attributes = read_matrix(out / "attributes.dpm1")
        ok = rc == 0 and features.shape[1] == 2048 and attributes.shape == (50, 85)
        report("awa2-dimensions", ok,
               f"features {features.shape[0]}x{features.shape[1]}, "
               f"attributes {attributes.shape[0]}x{attributes.shape[1]}, exit {rc}")
        assert ok

    def test_cub(self, tmp_path):
        src = tmp_path / "src"
        make_cub_source(src)
        out = tmp_path / "out"
        rc = main(["cub", "--source", str(src), "--out", str(out)])
        attributes = read_matrix(out / "attributes.dpm1")
        ok = rc == 0 and attributes.shape == (200, 312)
        report("cub-dimensions", ok,
               f"attributes {attributes.shape[0]}x{attributes.shape[1]}, exit {rc}")
        assert ok


class TestSplitAndVerify:
    def test_disjointness_and_verify_exit(self, tmp_path, capsys):
        src = tmp_path / "src"
        make_awa2_source(src)
        out = tmp_path / "out"
        assert main(["awa2", "--source", str(src), "--out", str(out)]) == 0
        split = (out / "split.txt").read_text().splitlines()
        boundary = split.index("test:")
        train = set(split[1:boundary])
        test = set(split[boundary + 1:])
        disjoint = not (train & test)

        rc = main(["verify", "--dir", str(out)])
        captured = capsys.readouterr().out
        ok = disjoint and rc == 0 and "FAIL" not in captured
        report("split-disjoint-and-verify", ok,
               f"{len(train)} train / {len(test)} test classes, verify exit {rc}")
        assert ok
