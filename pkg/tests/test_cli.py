"""Document schemas and command-line behavior, including exit codes."""

import json

import pytest

from reductlab import catalog, jsonio
from reductlab.cli import main
from reductlab.redprod import ProductFamily
from reductlab.util import InputError


@pytest.fixture
def docs(tmp_path):
    """A small document workspace on disk."""
    z2 = catalog.cyclic_group(2)
    s3 = catalog.symmetric_group(3)
    f2 = catalog.galois_field_ring(2)
    paths = {}

    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc), encoding="utf-8")
        paths[name] = str(p)
        return str(p)

    write("z2.json", jsonio.algebra_to_doc(z2))
    write("s3.json", jsonio.algebra_to_doc(s3))
    write("f2.json", jsonio.algebra_to_doc(f2))
    write("filt02.json", {"index_size": 3, "sets": [[0, 2]], "close": True})
    write("filt_closed.json",
          {"index_size": 2, "sets": [[0], [0, 1]], "close": False})
    write("notfilt.json",
          {"index_size": 3, "sets": [[0, 1], [1, 2], [0, 1, 2]], "close": False})
    write("bad_algebra.json",
          {"name": "bad", "size": 2,
           "ops": [{"symbol": "mul", "arity": 2, "table": [0, 1, 1]}]})
    fam = ProductFamily([z2, z2, z2])
    write("proj0.json", {
        "factors": ["z2.json", "z2.json", "z2.json"],
        "codomain": "z2.json",
        "table": [fam.decode(a)[0] for a in range(8)],
    })
    write("nonhom.json", {
        "factors": ["z2.json", "z2.json"],
        "codomain": "z2.json",
        "table": [0, 1, 1, 1],
    })
    write("comm.json", {
        "signature": "s3.json",
        "lhs": "mul(mul(inv(mul(x,inv(x'))),inv(mul(y,inv(y')))),"
               "mul(mul(x,inv(x')),mul(y,inv(y'))))",
        "rhs": "e",
        "z_arity": 0,
        "name": "commutator",
    })
    write("matrix.json", {"rows": 2, "cols": 2, "field": "rational",
                          "entries": [1, "1/2", "1/2", "1/3"]})
    write("singular.json", {"rows": 2, "cols": 2, "field": 5,
                            "entries": [1, 1, 1, 1]})
    paths["dir"] = str(tmp_path)
    return paths


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestDocuments:
    def test_algebra_roundtrip(self, docs):
        a = jsonio.load_algebra(docs["s3.json"])
        b = jsonio.algebra_from_doc(jsonio.algebra_to_doc(a))
        assert a.tables == b.tables and a.identity == b.identity

    def test_filter_close_false_accepts_real_filter(self, docs):
        f = jsonio.load_filter(docs["filt_closed.json"])
        assert f.base_mask == 0b01

    def test_filter_close_false_rejects_non_filter(self, docs):
        with pytest.raises(InputError):
            jsonio.load_filter(docs["notfilt.json"])

    def test_hom_document_with_relative_refs(self, docs):
        family, hom = jsonio.load_hom(docs["proj0.json"])
        assert family.product.size == 8
        assert hom.is_surjective()

    def test_non_hom_document_rejected(self, docs):
        with pytest.raises(InputError):
            jsonio.load_hom(docs["nonhom.json"])
        # but accepted as a plain map for detection
        family, raw = jsonio.load_hom(docs["nonhom.json"], check=False)
        assert raw.mapping == (0, 1, 1, 1)

    def test_relation_document(self, docs):
        r = jsonio.load_relation(docs["comm.json"])
        assert r.name == "commutator"

    def test_relation_inline_signature(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text(json.dumps({
            "signature": [["f", 2]], "lhs": "f(x,y)", "rhs": "f(y,x)",
        }), encoding="utf-8")
        r = jsonio.load_relation(str(p))
        assert r.signature.arity("f") == 2

    def test_matrix_roundtrip_with_fractions(self, docs):
        m = jsonio.load_matrix(docs["matrix.json"])
        doc = jsonio.matrix_to_doc(m)
        assert doc["entries"] == [1, "1/2", "1/2", "1/3"]

    def test_missing_file(self):
        with pytest.raises(InputError):
            jsonio.load_algebra("/no/such/file.json")


class TestExitCodes:
    def test_pass_is_zero(self, docs, capsys):
        code, report = run_cli(capsys, "filter", "decompose", docs["filt02.json"])
        assert code == 0
        assert report["verdict"] == "pass"
        assert report["payload"]["points"] == [0, 2]

    def test_mathematical_fail_is_one(self, docs, capsys):
        code, report = run_cli(capsys, "filter", "bdd", docs["filt02.json"], "--n", "1")
        assert code == 1
        assert report["verdict"] == "fail"
        assert report["witnesses"]

    def test_input_error_is_two(self, docs, capsys):
        code, report = run_cli(capsys, "algebra", "check", docs["bad_algebra.json"])
        assert code == 2
        assert report["verdict"] == "error"

    def test_usage_error_is_two(self, capsys):
        assert main(["no-such-command"]) == 2


class TestTranscripts:
    def test_filter_decompose_transcript(self, docs, capsys):
        code, report = run_cli(capsys, "filter", "decompose", docs["filt02.json"])
        assert (code, report["payload"]) == (0, {"points": [0, 2]})

    def test_redprod_factor_projection(self, docs, capsys):
        code, report = run_cli(capsys, "redprod", "factor", "--hom", docs["proj0.json"])
        assert code == 0
        assert report["payload"]["ultrafilter_points"] == [0]
        assert report["payload"]["filter_base"] == [0]
        assert report["payload"]["bridge_table"] == [0, 1]

    def test_algebra_identity_fail_with_witness(self, docs, capsys):
        code, report = run_cli(capsys, "algebra", "identity", docs["s3.json"],
                               "--lhs", "mul(x,y)", "--rhs", "mul(y,x)")
        assert code == 1
        assert report["witnesses"] == [{"x": 1, "y": 2}]

    def test_rel_dr_and_perp(self, docs, capsys):
        code, report = run_cli(capsys, "rel", "dr", "--algebra", docs["s3.json"],
                               "--relation", docs["comm.json"])
        assert code == 0 and report["payload"]["holds"]
        code, report = run_cli(capsys, "rel", "perp", "--algebra", docs["s3.json"],
                               "--relations", docs["comm.json"], "--pairs", "full")
        assert code == 0
        assert report["payload"]["pairs"] == [[i, i] for i in range(6)]

    def test_rel_almost(self, docs, capsys):
        code, report = run_cli(capsys, "rel", "almost", "--algebra", docs["f2.json"],
                               "--flavor", "ring")
        assert code == 0 and report["payload"]["factors"] == 2

    def test_ek_verify_and_zerobound(self, docs, capsys):
        code, report = run_cli(capsys, "ek", "verify", "--matrix", docs["matrix.json"])
        assert code == 0
        code, report = run_cli(capsys, "ek", "verify", "--matrix", docs["singular.json"])
        assert code == 1 and report["witnesses"]
        code, report = run_cli(capsys, "ek", "zerobound", "--matrix",
                               docs["matrix.json"], "--coeffs", "1,-2")
        assert code == 0 and report["payload"]["bound_holds"]

    def test_ek_build_writes_document(self, docs, capsys, tmp_path):
        out = str(tmp_path / "m.json")
        code, report = run_cli(capsys, "ek", "build", "--size", "3",
                               "--field", "29", "--out", out)
        assert code == 0
        assert report["payload"]["checked_minors"] == 19
        reloaded = jsonio.load_matrix(out)
        assert reloaded.rows == 3

    def test_ek_redpow(self, docs, capsys):
        code, report = run_cli(capsys, "ek", "redpow", "--xsize", "3",
                               "--filter", docs["filt02.json"])
        assert code == 0 and report["payload"]["cardinality"] == 9

    def test_redprod_surj(self, docs, capsys):
        code, report = run_cli(capsys, "redprod", "surj", "--factors",
                               docs["z2.json"], docs["z2.json"], docs["z2.json"],
                               "--points", "0", "2")
        assert code == 0
        assert report["payload"]["surjective"] and report["payload"]["bijective"]

    def test_reports_deterministic_modulo_timing(self, docs, capsys):
        _, a = run_cli(capsys, "redprod", "factor", "--hom", docs["proj0.json"])
        _, b = run_cli(capsys, "redprod", "factor", "--hom", docs["proj0.json"])
        a.pop("timing"), b.pop("timing")
        assert a == b

    def test_fault_injection_exits_one(self, capsys):
        code, report = run_cli(capsys, "verify-all", "--fault", "S3:mul:7:3")
        assert code == 1
        assert report["witnesses"]

    def test_noop_fault_passes(self, capsys):
        code, report = run_cli(capsys, "verify-all", "--fault", "S3:mul:7:0")
        assert code == 0


class TestVerifyAll:
    # every suite is covered individually in the module tests; here a
    # representative subset exercises the runner and its aggregation
    SUBSET = ["setfam.bdd", "ualg.codec", "redprod.detect_converse",
              "relcheck.chain", "eklab.cauchy", "verify.fault_injection"]

    def _pin_subset(self, monkeypatch):
        from reductlab import cli as cli_module
        from reductlab.verify import all_suites as full

        monkeypatch.setattr(
            cli_module, "all_suites",
            lambda caps: [p for p in full(caps) if p[0] in self.SUBSET],
        )

    def test_suites_pass_and_thread_pool_is_deterministic(self, capsys, monkeypatch):
        self._pin_subset(monkeypatch)
        code, serial = run_cli(capsys, "verify-all", "--max-index", "2",
                               "--max-size", "3", "--samples", "10")
        assert code == 0
        assert serial["payload"]["failed"] == 0
        assert serial["payload"]["passed"] == len(self.SUBSET)
        assert all(line.startswith("PASS ") for line in serial["payload"]["suites"])
        monkeypatch.setenv("REDUCTLAB_THREADS", "4")
        code, threaded = run_cli(capsys, "verify-all", "--max-index", "2",
                                 "--max-size", "3", "--samples", "10")
        assert code == 0
        serial.pop("timing"), threaded.pop("timing")
        assert serial == threaded

    def test_caps_beyond_module_limits_exit_two(self, capsys):
        code, report = run_cli(capsys, "verify-all", "--max-index", "20")
        assert code == 2 and report["verdict"] == "error"

    def test_missing_required_options_exit_two(self, capsys, docs):
        assert main(["ek", "build"]) == 2
        capsys.readouterr()
        assert main(["ek", "zerobound", "--matrix", docs["matrix.json"]]) == 2
        capsys.readouterr()
        assert main(["redprod", "factor"]) == 2
        capsys.readouterr()
        assert main(["algebra", "identity", docs["s3.json"], "--lhs", "x"]) == 2
        capsys.readouterr()
        assert main(["rel", "chain", "--hom", docs["proj0.json"]]) == 2
        capsys.readouterr()


class TestEnvironment:
    def test_report_written_to_out_dir(self, docs, capsys, tmp_path, monkeypatch):
        out_dir = tmp_path / "reports"
        monkeypatch.setenv("REDUCTLAB_OUT", str(out_dir))
        code, report = run_cli(capsys, "filter", "decompose", docs["filt02.json"])
        assert code == 0
        written = json.loads((out_dir / "filter-decompose.json").read_text())
        assert written["payload"] == report["payload"]

    def test_bad_thread_count_rejected(self, monkeypatch, capsys):
        monkeypatch.setenv("REDUCTLAB_THREADS", "zero")
        code, _ = run_cli(capsys, "verify-all", "--max-index", "1")
        assert code == 2
