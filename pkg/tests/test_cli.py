import json
import random

import pytest

from gvblocks import cli
from gvblocks.config import parse_config, parse_config_data
from gvblocks.errors import ConfigError

SEMION_POINTED = {
    "category": {
        "pointed": {"invariant_factors": [2], "qform_matrix": [["1/4"]], "h0": [0]}
    }
}
SEMION_LATTICE = {"category": {"lattice": {"gram": [[2]], "xi": ["0/1"]}}}
FF8 = {"category": {"lattice": {"gram": [[8]], "xi": ["1/8"]}}}
FIB = {"category": {"builtin": "fibonacci"}}


def write_config(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data), encoding="utf-8")
    return str(p)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseConfig:
    def test_lattice_route(self, tmp_path):
        cfg = parse_config(write_config(tmp_path, SEMION_LATTICE))
        from gvblocks.config import build_category

        C = build_category(cfg)
        assert C.group.invariant_factors == (2,)
        assert C.qform((1,)) == cli.Fraction(1, 4)

    def test_pointed_route_agrees_with_lattice(self, tmp_path):
        from gvblocks.config import build_category

        C1 = build_category(parse_config(write_config(tmp_path, SEMION_POINTED, "a.json")))
        C2 = build_category(parse_config(write_config(tmp_path, SEMION_LATTICE, "b.json")))
        assert C1.group == C2.group
        assert C1.qform.matrix == C2.qform.matrix
        assert C1.h0 == C2.h0

    def test_two_variants_rejected(self):
        data = {
            "category": {
                "builtin": "ising",
                "lattice": {"gram": [[2]], "xi": ["0/1"]},
            }
        }
        with pytest.raises(ConfigError) as e:
            parse_config_data(data)
        assert "exactly one" in e.value.message

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            parse_config(tmp_path / "absent.json")

    def test_malformed_rational(self):
        data = {"category": {"lattice": {"gram": [[2]], "xi": ["1/0"]}}}
        with pytest.raises(ConfigError) as e:
            parse_config_data(data)
        assert "xi[0]" in e.value.message

    def test_field_paths(self):
        with pytest.raises(ConfigError) as e:
            parse_config_data({"category": {"pointed": {"invariant_factors": [2]}}})
        assert "pointed" in e.value.message

    def test_fuzz_no_uncontrolled_exceptions(self):
        rng = random.Random(55)
        atoms = [
            0, 1, -3, "1/4", "x", True, None, [], {}, [1, 2], {"a": 1},
            "fibonacci", [[2]], [["1/4"]], 3.5,
        ]

        def mutate(obj, depth=0):
            r = rng.random()
            if depth < 3 and r < 0.3 and isinstance(obj, dict):
                out = dict(obj)
                if out and r < 0.15:
                    out.pop(rng.choice(sorted(out)))
                else:
                    out[rng.choice(["category", "junk", "tolerance"])] = mutate(
                        rng.choice(atoms), depth + 1
                    )
                return out
            if depth < 3 and isinstance(obj, dict):
                return {k: mutate(v, depth + 1) for k, v in obj.items()}
            if depth < 3 and isinstance(obj, list):
                return [mutate(v, depth + 1) for v in obj]
            return rng.choice(atoms) if r < 0.4 else obj

        bases = [SEMION_POINTED, SEMION_LATTICE, FF8, FIB, {}, {"category": {}}]
        for _ in range(400):
            data = mutate(rng.choice(bases))
            try:
                parse_config_data(data)
            except ConfigError:
                pass  # structured rejection is the contract


class TestSubcommands:
    def test_inspect_feigin_fuchs(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "inspect", "--config", write_config(tmp_path, FF8)
        )
        assert code == 0
        assert "modular: false" in out
        assert "cofactorizable: true" in out
        assert "connected: true" in out

    def test_inspect_json_fields(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "inspect", "--config", write_config(tmp_path, SEMION_POINTED), "--json"
        )
        data = json.loads(out)
        assert data["verdicts"] == {
            "nondegenerate": True,
            "cofactorizable": True,
            "modular": True,
            "connected": "true",
            "extension_unique": "true",
        }
        assert data["anomaly"]["central_charge_mod8"] == 1.0

    def test_blocks_direct_and_glued(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FF8)
        code, out, _ = run_cli(
            capsys, "blocks", "--config", cfg, "--genus", "2", "--glued", "--json"
        )
        data = json.loads(out)
        assert code == 0
        dims = {r["method"]: r["dim"] for r in data["results"]}
        assert dims["direct"] == 0 and dims["glued"] == 0
        assert all(not r["condition_met"] for r in data["results"])
        code, out, _ = run_cli(
            capsys, "blocks", "--config", cfg, "--genus", "1", "--labels", "", "--json"
        )
        data = json.loads(out)
        assert data["results"][0]["dim"] == 8

    def test_blocks_with_labels(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SEMION_LATTICE)
        code, out, _ = run_cli(
            capsys, "blocks", "--config", cfg, "--genus", "0", "--labels", "1;1", "--json"
        )
        data = json.loads(out)
        assert code == 0 and data["results"][0]["dim"] == 1

    def test_blocks_bad_labels(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SEMION_LATTICE)
        code, _, err = run_cli(
            capsys, "blocks", "--config", cfg, "--genus", "0", "--labels", "1,0"
        )
        assert code == 2

    def test_torus_rep_unsupported_exit_3(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "torus-rep", "--config", write_config(tmp_path, FF8)
        )
        assert code == 3
        assert "torus.unsupported" in err

    def test_torus_rep_semion(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "torus-rep", "--config", write_config(tmp_path, SEMION_POINTED), "--json"
        )
        data = json.loads(out)
        assert code == 0
        assert data["lambda"][0] == pytest.approx(2**-0.5, abs=1e-9)
        assert data["relations_pass"] is True
        assert data["S"][1][1] == [-0.707106781187, -0.0]

    def test_torus_rep_builtin(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "torus-rep", "--config", write_config(tmp_path, FIB), "--json"
        )
        assert code == 0
        assert json.loads(out)["relations_pass"] is True

    def test_lattice_report(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "lattice", "--config", write_config(tmp_path, FF8), "--json"
        )
        data = json.loads(out)
        assert code == 0
        assert data["discriminant_group"]["invariant_factors"] == [8]
        assert data["h0"] == [1] and data["g0"] == [2]

    def test_lattice_needs_lattice_config(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "lattice", "--config", write_config(tmp_path, SEMION_POINTED)
        )
        assert code == 2

    def test_verlinde_table(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys,
            "verlinde",
            "--config",
            write_config(tmp_path, FIB),
            "--max-genus",
            "2",
            "--json",
        )
        data = json.loads(out)
        assert [row["rounded"] for row in data["table"]] == [2, 5]

    def test_config_error_exit_2(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{nope", encoding="utf-8")
        code, _, err = run_cli(capsys, "inspect", "--config", str(p))
        assert code == 2
        assert "cli.config" in err

    def test_json_output_is_stable(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FF8)
        outs = []
        for _ in range(2):
            code, out, _ = run_cli(capsys, "inspect", "--config", cfg, "--json")
            assert code == 0
            outs.append(out)
        assert outs[0] == outs[1]
        for sub in (["blocks", "--genus", "3", "--glued"], ["lattice"], ["verlinde"]):
            outs = []
            for _ in range(2):
                code, out, _ = run_cli(capsys, sub[0], *sub[1:], "--config", cfg, "--json")
                outs.append(out)
            assert outs[0] == outs[1]
