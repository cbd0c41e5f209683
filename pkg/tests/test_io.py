import numpy as np
import pytest

from jetnormal.errors import MalformedLine
from jetnormal.geometry import PointCloud
from jetnormal.io import (
    error_colors,
    format_float,
    read_config,
    read_normals,
    read_xyz,
    write_error_ply,
    write_normals,
    write_xyz,
)


class TestFormat:
    @pytest.mark.parametrize("x, s", [(0.0, "0"), (1.0, "1"), (-2.0, "-2"), (0.1, "0.1"), (1e-20, "1e-20")])
    def test_shortest(self, x, s):
        assert format_float(x) == s

    def test_roundtrip_bits(self):
        rng = np.random.default_rng(0)
        vals = np.concatenate([rng.standard_normal(1000), rng.standard_normal(100) * 1e300, [5e-324, -0.0]])
        back = np.array([float(format_float(v)) for v in vals])
        assert back.tobytes() == vals.tobytes()


class TestXyz:
    def test_two_points(self, tmp_path):
        f = tmp_path / "a.xyz"
        f.write_text("0 0 0\n1 0 0\n")
        cloud = read_xyz(f)
        np.testing.assert_array_equal(cloud.points, [[0, 0, 0], [1, 0, 0]])

    def test_comments_and_blank_lines(self, tmp_path):
        f = tmp_path / "a.xyz"
        f.write_text("# comment\n0 0 0\n\n  1\t2  3 \n")
        assert len(read_xyz(f)) == 2

    @pytest.mark.parametrize("text, line", [("1 2\n", 1), ("0 0 0\n1 2 3 4\n", 2), ("0 0 0\n# c\nx 1 2\n", 3),
                                            ("nan 0 0\n", 1), ("0 inf 0\n", 1)])
    def test_malformed(self, tmp_path, text, line):
        f = tmp_path / "a.xyz"
        f.write_text(text)
        with pytest.raises(MalformedLine) as info:
            read_xyz(f)
        assert info.value.line_no == line

    def test_paired_normals(self, tmp_path):
        write_xyz(tmp_path / "p.xyz", [[0, 0, 0], [1, 1, 1]])
        write_normals(tmp_path / "p.normals", [[0, 0, 1], [0, 1, 0]])
        cloud = read_xyz(tmp_path / "p.xyz", tmp_path / "p.normals")
        np.testing.assert_array_equal(cloud.gt_normals, [[0, 0, 1], [0, 1, 0]])
        write_normals(tmp_path / "q.normals", [[0, 0, 1]])
        with pytest.raises(ValueError):
            read_xyz(tmp_path / "p.xyz", tmp_path / "q.normals")

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_xyz(tmp_path / "nope.xyz")


class TestNormals:
    def test_single(self, tmp_path):
        f = tmp_path / "n.normals"
        write_normals(f, [(0.0, 0.0, 1.0)])
        assert f.read_bytes() == b"0 0 1\n"

    def test_empty(self, tmp_path):
        f = tmp_path / "n.normals"
        write_normals(f, np.zeros((0, 3)))
        assert f.read_bytes() == b""
        assert read_normals(f).shape == (0, 3)

    def test_roundtrip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(1)
        v = rng.standard_normal((1000, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        f = tmp_path / "n.normals"
        write_normals(f, v)
        assert read_normals(f).tobytes() == v.tobytes()
        assert b"\r" not in f.read_bytes()

    def test_points_roundtrip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(2)
        p = rng.standard_normal((500, 3)) * 10.0 ** rng.integers(-8, 8, (500, 3))
        write_xyz(tmp_path / "p.xyz", p)
        assert read_xyz(tmp_path / "p.xyz").points.tobytes() == p.tobytes()

    def test_unwritable(self, tmp_path):
        with pytest.raises(OSError):
            write_normals(tmp_path / "missing" / "n.normals", [[0, 0, 1]])


class TestPly:
    def test_colormap_endpoints(self):
        c = error_colors([0.0, 30.0, 60.0, 100.0, -5.0])
        np.testing.assert_array_equal(c[0], [0, 0, 255])
        np.testing.assert_array_equal(c[2], [255, 0, 0])
        np.testing.assert_array_equal(c[3], [255, 0, 0])
        np.testing.assert_array_equal(c[4], [0, 0, 255])
        assert int(c[1, 0]) + int(c[1, 2]) == 255
        np.testing.assert_array_equal(error_colors([40.0], max_deg=40.0)[0], [255, 0, 0])

    def test_header_grammar(self, tmp_path):
        rng = np.random.default_rng(3)
        pts = rng.standard_normal((7, 3))
        f = tmp_path / "e.ply"
        write_error_ply(f, PointCloud(pts), rng.uniform(0, 90, 7))
        lines = f.read_text().split("\n")
        assert lines[0] == "ply" and lines[1] == "format ascii 1.0"
        end = lines.index("end_header")
        header = lines[:end]
        assert "element vertex 7" in header
        props = [line.split()[-1] for line in header if line.startswith("property")]
        assert props == ["x", "y", "z", "red", "green", "blue"]
        body = [line for line in lines[end + 1:] if line]
        assert len(body) == 7
        for line, p in zip(body, pts):
            vals = line.split()
            assert len(vals) == len(props)
            np.testing.assert_array_equal([float(v) for v in vals[:3]], p)
            assert all(0 <= int(v) <= 255 for v in vals[3:])

    def test_length_mismatch(self, tmp_path):
        with pytest.raises(ValueError):
            write_error_ply(tmp_path / "e.ply", np.zeros((3, 3)), [1.0, 2.0])


class TestConfig:
    def test_parse(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("# runs\nk = 32\nmax-iters=7  # inline\n\nweights = irls\n")
        assert read_config(f) == {"k": "32", "max_iters": "7", "weights": "irls"}

    def test_malformed(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("k 32\n")
        with pytest.raises(MalformedLine):
            read_config(f)
