"""Command-line surface: subcommands, flag validation, determinism."""

import numpy as np
import pytest

from conftest import make_bracket, make_scene
from dctfusion.cli import main
from dctfusion.io import add_gaussian_noise, load_png, save_png


@pytest.fixture
def bracket_files(tmp_path):
    scene = make_scene(32, 40, seed=21)
    paths = []
    for i, img in enumerate(make_bracket(scene)):
        p = tmp_path / f"exp{i}.png"
        save_png(img, p)
        paths.append(str(p))
    return paths, tmp_path


def test_fuse_single_input_is_identity(tmp_path, rng):
    src = tmp_path / "in.png"
    dst = tmp_path / "out.png"
    save_png(rng.random((24, 24, 3)), src)
    assert main(["fuse", str(src), "-o", str(dst)]) == 0
    np.testing.assert_allclose(load_png(dst), load_png(src), atol=1 / 510)


def test_fuse_bracket_writes_output(bracket_files):
    paths, tmp = bracket_files
    out = tmp / "fused.png"
    assert main(["fuse", *paths, "-o", str(out)]) == 0
    img = load_png(out)
    assert img.shape == (32, 40, 3)


def test_denoise_fuse_requires_sigma(bracket_files, capsys):
    paths, tmp = bracket_files
    with pytest.raises(SystemExit) as exc:
        main(["denoise-fuse", *paths, "-o", str(tmp / "x.png")])
    assert exc.value.code == 2
    assert "--sigma" in capsys.readouterr().err


def test_denoise_fuse_runs(bracket_files):
    paths, tmp = bracket_files
    noisy_paths = []
    for i, p in enumerate(paths):
        noisy = add_gaussian_noise(load_png(p), 15.0, seed=i)
        np_path = tmp / f"noisy{i}.png"
        save_png(noisy, np_path)
        noisy_paths.append(str(np_path))
    out = tmp / "joint.png"
    code = main(
        ["denoise-fuse", *noisy_paths, "-o", str(out), "--sigma", "15",
         "--search", "9", "--knn", "4"]
    )
    assert code == 0
    assert load_png(out).shape == (32, 40, 3)


def test_add_noise_deterministic(tmp_path, rng):
    src = tmp_path / "in.png"
    save_png(rng.random((16, 16, 1)), src)
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    assert main(["add-noise", str(src), "-o", str(a), "--sigma", "15", "--seed", "9"]) == 0
    assert main(["add-noise", str(src), "-o", str(b), "--sigma", "15", "--seed", "9"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_psnr_self_is_inf(tmp_path, rng, capsys):
    p = tmp_path / "img.png"
    save_png(rng.random((16, 16, 3)), p)
    assert main(["psnr", str(p), str(p)]) == 0
    assert capsys.readouterr().out.strip() == "inf"


def test_psnr_value_printed(tmp_path, capsys):
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    save_png(np.zeros((8, 8, 1)), a)
    save_png(np.ones((8, 8, 1)), b)
    assert main(["psnr", str(a), str(b)]) == 0
    assert float(capsys.readouterr().out.strip()) == pytest.approx(0.0)


def test_deterministic_flag_byte_identical(bracket_files):
    paths, tmp = bracket_files
    outs = []
    for name in ("d1.png", "d2.png"):
        out = tmp / name
        code = main(
            ["fuse", *paths, "-o", str(out), "--sigma", "10", "--deterministic"]
        )
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_bench_prints_cost_report(bracket_files, capsys):
    paths, tmp = bracket_files
    out = tmp / "bench.png"
    code = main(
        ["bench", *paths, "-o", str(out), "--sigma", "10",
         "--search", "9", "--knn", "4"]
    )
    assert code == 0
    text = capsys.readouterr().out
    assert text.count("ops/px") == 7  # six terms plus the per-pixel total
    assert "block matching" in text
    assert "adjusted for step=2" in text
    assert "s/Mpx" in text


def test_dump_weights_writes_maps(bracket_files):
    paths, tmp = bracket_files
    out = tmp / "fused.png"
    code = main(["fuse", *paths, "-o", str(out), "--dump-weights", "--block", "4"])
    assert code == 0
    maps = sorted((tmp / "fused_weights").glob("*.png"))
    assert len(maps) == 3 * 4 * 4  # exposures x frequencies
    sample = load_png(maps[0])
    assert sample.min() >= 0.0 and sample.max() <= 1.0


def test_dump_weights_joint_mode(bracket_files):
    paths, tmp = bracket_files
    out = tmp / "joint.png"
    code = main(
        ["denoise-fuse", *paths, "-o", str(out), "--sigma", "10",
         "--search", "9", "--knn", "4", "--dump-weights"]
    )
    assert code == 0
    maps = list((tmp / "joint_weights").glob("*.png"))
    assert len(maps) == 3 * 8 * 8


def test_mismatched_inputs_fail_cleanly(tmp_path, rng, capsys):
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    save_png(rng.random((16, 16, 3)), a)
    save_png(rng.random((16, 20, 3)), b)
    assert main(["fuse", str(a), str(b), "-o", str(tmp_path / "o.png")]) == 1
    assert "pre-registered" in capsys.readouterr().err


def test_missing_input_fails_cleanly(tmp_path, capsys):
    assert main(["psnr", str(tmp_path / "no.png"), str(tmp_path / "no.png")]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_flag_wiring():
    from dctfusion.cli import _config, build_parser

    args = build_parser().parse_args(
        ["denoise-fuse", "a.png", "b.png", "-o", "out.png",
         "--sigma", "25", "--sigma-fusion", "10", "--p", "5", "--thresh", "3.1",
         "--block", "4", "--step", "3", "--knn", "9", "--search", "21",
         "--sigma-l", "0.15", "--sigma-g", "0.3", "--threads", "2",
         "--deterministic"]
    )
    cfg = _config(args)
    assert cfg.mode == "joint"
    assert cfg.fusion.sigma == pytest.approx(25 / 255)
    assert cfg.sigma_fusion == pytest.approx(10 / 255)
    assert cfg.fusion.p == 5.0
    assert cfg.fusion.thresh == 3.1
    assert cfg.fusion.b == cfg.match.b == 4
    assert cfg.step == 3
    assert cfg.match.k_nn == 9
    assert cfg.match.search == 21
    assert cfg.fusion.sigma_l == 0.15
    assert cfg.fusion.sigma_g == 0.3
    assert cfg.threads == 2
    assert cfg.deterministic


def test_threads_flag_matches_single(bracket_files):
    paths, tmp = bracket_files
    one = tmp / "t1.png"
    four = tmp / "t4.png"
    assert main(["fuse", *paths, "-o", str(one)]) == 0
    assert main(["fuse", *paths, "-o", str(four), "--threads", "4"]) == 0
    assert one.read_bytes() == four.read_bytes()
