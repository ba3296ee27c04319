use bifib::cell::{expand_all_i, flatten, CellKind};
use bifib::decompose::{
    decompose, decompose_odd_odd, even_r_cell_count, period_l, refine, DecomposeError,
    DecomposeOptions, ParityCase,
};
use bifib::word::{self, Params};

fn params(a: u32, b: u32) -> Params {
    Params::new(a, b).unwrap()
}

fn expanded(p: &Params, n: u32) -> bifib::CellStructure {
    decompose(
        p,
        n,
        DecomposeOptions {
            expand_i: true,
            compose_twice: false,
        },
    )
    .unwrap()
}

#[test]
fn expanded_cells_are_f_or_t_at_one_level() {
    for (a, b, n, drop) in [(2, 2, 9, 2), (3, 5, 9, 3), (3, 2, 10, 4), (2, 1, 11, 4), (1, 2, 11, 2), (1, 1, 10, 3)] {
        let p = if (a, b) == (1, 1) {
            Params::classical()
        } else {
            params(a, b)
        };
        let s = expanded(&p, n);
        assert!(s.cells.iter().all(|c| c.kind != CellKind::I));
        assert_eq!(s.levels(), vec![n - drop], "({a},{b},{n})");
        assert_eq!(flatten(&s).unwrap(), word::word_f(&p, n).unwrap());
    }
}

#[test]
fn row_two_uses_the_current_exponent() {
    // With r != s a block exponent of r(n-3) would give the wrong length.
    let p = params(3, 5);
    let s = decompose_odd_odd(&p, 9).unwrap();
    let r = p.r(9);
    let first_i = s.cells.iter().position(|c| c.kind == CellKind::I).unwrap();
    assert_eq!(first_i as u32, r);
    assert_eq!(s.parent_length, word::length_f(&p, 9).unwrap());
}

#[test]
fn period_claim_per_row() {
    // Both even: one row-1 step.
    let p = params(2, 4);
    let s = decompose(&p, 9, DecomposeOptions::default()).unwrap();
    assert_eq!(s.period, period_l(&p));
    // r odd, s even: one row-3 step.
    for (a, b, n) in [(3, 2, 10), (2, 3, 9), (5, 4, 10)] {
        let p = params(a, b);
        let s = decompose(&p, n, DecomposeOptions::default()).unwrap();
        assert_eq!(ParityCase::of(&p, n), ParityCase::OddEven);
        assert_eq!(s.period, period_l(&p));
    }
    // Both odd: two row-2 steps.
    let p = params(3, 5);
    let twice = DecomposeOptions {
        expand_i: false,
        compose_twice: true,
    };
    let s = decompose(&p, 11, twice).unwrap();
    assert_eq!(s.period, period_l(&p));
    assert!(s.self_similar);
    let once = decompose(&p, 11, DecomposeOptions::default()).unwrap();
    assert!(!once.self_similar);
}

#[test]
fn refined_t_cells_keep_flatten_consistent() {
    // Row 1 ends in F, so every T cell refinement toggles a final F to T.
    let p = params(2, 2);
    let s = decompose(&p, 11, DecomposeOptions::default()).unwrap();
    for depth in 1..=2 {
        let r = refine(&s, depth).unwrap();
        r.validate().unwrap();
        assert_eq!(r.levels(), vec![11 - 2 - 2 * depth]);
        assert_eq!(flatten(&r).unwrap(), word::word_f(&p, 11).unwrap());
    }
}

#[test]
fn cell_counts_follow_the_row_pattern() {
    let p = params(2, 3);
    let s = decompose(&p, 8, DecomposeOptions::default()).unwrap();
    assert_eq!(s.cells.len(), 7);
    assert_eq!(even_r_cell_count(&p, 8), 7);
    assert_eq!(s.kind_counts(), [4, 2, 1]);
    let e = expand_all_i(&s).unwrap();
    assert_eq!(e.kind_counts(), [5, 3, 0]);
}

#[test]
fn unit_parameters_shift_minimums() {
    let cases = [
        (1, 2, 8, ParityCase::EvenR),
        (1, 3, 9, ParityCase::BothOdd),
        (2, 1, 10, ParityCase::OddEven),
    ];
    for (a, b, min, case) in cases {
        let p = params(a, b);
        let n = (min - 4..min).rev().find(|&n| ParityCase::of(&p, n) == case).unwrap();
        assert_eq!(
            decompose(&p, n, DecomposeOptions::default()).unwrap_err(),
            DecomposeError::TooSmall { n, min, case }
        );
        let n_ok = (min..min + 4).find(|&n| ParityCase::of(&p, n) == case).unwrap();
        let s = decompose(&p, n_ok, DecomposeOptions::default()).unwrap();
        assert_eq!(flatten(&s).unwrap(), word::word_f(&p, n_ok).unwrap());
    }
}

#[test]
fn decomposition_is_deterministic() {
    let p = params(4, 3);
    let a = decompose(&p, 10, DecomposeOptions::default()).unwrap();
    let b = decompose(&p, 10, DecomposeOptions::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}
