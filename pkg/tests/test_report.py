from deducreduc.encoder import encode
from deducreduc.pbf import Polynomial
from deducreduc.reduc import Stage
from deducreduc.report import ReductionReport, load_references, reference_for
from deducreduc.textio import parse_inline


def test_reference_rows_are_consistent():
    refs = load_references()
    assert [r.product for r in refs] == [455937533473, 292951160076082381,
                                         1208925727750433490141601]
    for ref in refs:
        assert ref.factors[0] * ref.factors[1] == ref.product
        assert ref.factors[0].bit_length() == ref.p_bits
        assert [r.stage for r in ref.rows][:3] == ["Original", "SimpleJudgments", "Reduction(100)"]
        quartic = [r.counts[4] for r in ref.rows]
        assert quartic == sorted(quartic, reverse=True)
    ex1 = reference_for(455937533473)
    assert ex1.row("Original").qubits == 174
    assert ex1.row("Reduction(1000)").counts == {4: 1645, 3: 2794, 2: 1411, 1: 126}
    assert reference_for(143) is None
    assert reference_for(455937533473, 19, 21) is None


def test_rows_are_recomputed_from_polynomials():
    h = parse_inline("2 x1 x2 x3 x4 + x1 + 1")
    report = ReductionReport.from_stages([Stage("Original", h, None), Stage("Reduction", Polynomial(), 3)])
    assert report.rows[0].qubits == 4
    assert report.rows[0].profile.counts == {4: 1, 1: 1, 0: 1}
    assert report.rows[1].deductions == 3


def test_keyvalue_blocks_and_deltas():
    inst = encode(455937533473, 20, 20)
    ref = reference_for(455937533473, 20, 20)
    report = ReductionReport.from_stages([Stage("Original", inst.hamiltonian(), None, 1.5)],
                                         {"states": 1000}, ref)
    text = report.keyvalue()
    assert "config.states = 1000" in text
    assert "[stage Original]" in text
    assert "delta.deg4 = +0" in text
    assert "delta.qubits = -17" in text
    assert "[timings]" not in text
    assert "Original = 1.500" in report.keyvalue(include_timings=True)
    table = report.table()
    assert "reference" in table and "delta" in table
