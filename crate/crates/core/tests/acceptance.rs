use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wordwidth::constants::constant_chain;
use wordwidth::decomposition::{
    block_diag_factor, elementary_product, factor_lu3u, steinberg_conjugate, Lu3uOutcome,
};
use wordwidth::finite::{
    closure, closure_exponent, conj_sum_decompose, diff_rank, enumerate_group, generates, greedy_cover,
    ladder_bound, power_product, random_lie, width, FiniteGroupTable, LieMatrix, SymSet,
};
use wordwidth::matrix::{
    elementary, mennicke_in_e, random_elementary_product, CongruenceLevel, IntMatrix, ModMatrix,
};
use wordwidth::padic::{newton_lift, padic_width_bound, word_coset_cover, CoverStatus, Poly, PolyMapDescriptor};
use wordwidth::words::parse_word;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn within(t: Instant, limit: Duration) -> bool {
    t.elapsed() <= limit
}

fn rand_pair(n: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let i = rng.gen_range(1..=n);
    let mut j = rng.gen_range(1..n);
    if j >= i {
        j += 1;
    }
    (i, j)
}

fn relation_engine() -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut done, mut bad) = (0, 0);
    while done < 10_000 {
        let n = rng.gen_range(3..=5);
        let (r, s) = rand_pair(n, &mut rng);
        let (i, j) = rand_pair(n, &mut rng);
        if j == r && i == s {
            continue;
        }
        let a = rng.gen_range(-1_000_000..=1_000_000i64);
        let b = rng.gen_range(-1_000_000..=1_000_000i64);
        let out = steinberg_conjugate(n, r, s, b, i, j, a).unwrap();
        let lhs = elementary_product(n, &out).unwrap();
        let rs = elementary(n, r, s, b).unwrap();
        let rhs = &(&rs * &elementary(n, i, j, a).unwrap()) * &elementary(n, r, s, -b).unwrap();
        if lhs != rhs {
            bad += 1;
        }
        done += 1;
    }
    verdict(bad == 0 && within(t, Duration::from_secs(10)), format!("{done} instances, {bad} mismatches, {:?}", t.elapsed()))
}

fn random_block(q: &CongruenceLevel, rng: &mut ChaCha8Rng) -> IntMatrix {
    let len = rng.gen_range(0..=4);
    random_elementary_product(3, q, len, rng)
}

fn block_certificates() -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut bad, mut max_bits) = (0, 0);
    for _ in 0..1000 {
        let qv = [1i64, 2, 3, 5][rng.gen_range(0..4)];
        let q = CongruenceLevel::new(qv).unwrap();
        let m = rng.gen_range(1..=4);
        let mut blocks: Vec<IntMatrix> = (0..m - 1).map(|_| random_block(&q, &mut rng)).collect();
        let mut prefix = IntMatrix::identity(3);
        for g in &blocks {
            prefix = &prefix * g;
        }
        blocks.push(prefix.inverse().unwrap());
        let f = block_diag_factor(&blocks, &q).unwrap();
        let cert = f.certificate(&q).unwrap();
        for g in f.factors().unwrap() {
            max_bits = max_bits.max(g.matrix.max_bits());
        }
        let exact = f.reconstruct().unwrap() == IntMatrix::block_diag(&blocks);
        if !exact || !cert.verify().passed() {
            bad += 1;
        }
    }
    verdict(
        bad == 0 && max_bits <= 512 && within(t, Duration::from_secs(60)),
        format!("1000 tuples, {bad} failures, max entry {max_bits} bits, {:?}", t.elapsed()),
    )
}

fn pipeline() -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut soft, mut bad, mut total) = (0, 0, 0);
    let mut residuals = Vec::new();
    for k in 0..200 {
        let n = [6usize, 9, 12][k % 3];
        let qv = [1i64, 2, 3][(k / 3) % 3];
        let q = CongruenceLevel::new(qv).unwrap();
        let len = rng.gen_range(1..=25);
        let g = random_elementary_product(n, &q, len, &mut rng);
        total += 1;
        match factor_lu3u(&g, &q).unwrap() {
            Lu3uOutcome::Certified(cert) => {
                let ok = cert.factors.len() == 5
                    && cert.claimed == "L,Uc,Uc,Uc,U"
                    && cert.product().unwrap() == g
                    && cert.verify().passed();
                if !ok {
                    bad += 1;
                }
            }
            Lu3uOutcome::Soft(f) => {
                soft += 1;
                if f.residual.n() == 0 {
                    bad += 1;
                }
                residuals.push(format!("n={n} q={qv} residual {}x{}", f.residual.n(), f.residual.n()));
            }
        }
    }
    let rate = 100.0 * soft as f64 / total as f64;
    verdict(
        bad == 0 && soft * 20 <= total && within(t, Duration::from_secs(300)),
        format!("{total} elements, {bad} bad, {soft} soft ({rate:.1}%) {residuals:?}, {:?}", t.elapsed()),
    )
}

fn diagonal_inspection(g: &IntMatrix, q: i64) -> bool {
    let n = g.n();
    let q = BigInt::from(q);
    let q2 = &q * &q;
    for i in 1..=n {
        for j in 1..=n {
            let x = g.entry(i, j) - if i == j { BigInt::one() } else { BigInt::from(0) };
            let m = if i == j { &q2 } else { &q };
            if &x % m != BigInt::from(0) {
                return false;
            }
        }
    }
    g.det().is_one()
}

fn mennicke() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut words_bad = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(3..=5);
        let qv = rng.gen_range(2..=6);
        let q = CongruenceLevel::new(qv).unwrap();
        let len = rng.gen_range(1..=20);
        let g = random_elementary_product(n, &q, len, &mut rng);
        if !mennicke_in_e(&g, &q).unwrap() {
            words_bad += 1;
        }
    }
    let (mut disagree, mut inside) = (0, 0);
    let one = CongruenceLevel::new(1).unwrap();
    for _ in 0..1000 {
        let n = rng.gen_range(3..=5);
        let qv = rng.gen_range(2..=6);
        let q = CongruenceLevel::new(qv).unwrap();
        let h = loop {
            let len = rng.gen_range(1..=6);
            let h = random_elementary_product(n, &one, len, &mut rng);
            if !h.is_congruent_identity(&q) {
                break h;
            }
        };
        let (i, j) = rand_pair(n, &mut rng);
        let g = elementary(n, i, j, qv).unwrap().conjugate_by(&h).unwrap();
        let predicate = mennicke_in_e(&g, &q).unwrap();
        inside += predicate as usize;
        if predicate != diagonal_inspection(&g, qv) {
            disagree += 1;
        }
    }
    verdict(
        words_bad == 0 && disagree == 0,
        format!("words rejected {words_bad}/1000; conjugates disagree {disagree}/1000 ({inside} inside)"),
    )
}

fn load_oracle() -> Vec<(u64, usize, usize)> {
    include_str!("data/sl2_commutator_widths.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let v: Vec<u64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (v[0], v[2] as usize, v[4] as usize)
        })
        .collect()
}

fn widths() -> Verdict {
    let t = Instant::now();
    let comm = parse_word("[x1,x2]").unwrap();
    let g2 = Arc::new(enumerate_group(2, 2).unwrap());
    let els: Vec<ModMatrix> = (0..g2.len() as u32).map(|x| g2.element(x)).collect();
    let mut brute = std::collections::BTreeSet::new();
    for x in &els {
        for y in &els {
            let c = x.inverse().unwrap().mul(&y.inverse().unwrap()).unwrap().mul(x).unwrap().mul(y).unwrap();
            brute.insert(c.residues().to_vec());
        }
    }
    let w2 = width(&comm, &g2).unwrap();
    let mut ok = brute.len() == 3 && w2.value_set_size == 3 && w2.exact() == Some(1) && els.len() * els.len() == 36;
    let g3 = Arc::new(enumerate_group(2, 3).unwrap());
    let w12 = width(&parse_word("x1^12").unwrap(), &g3).unwrap();
    ok &= w12.exact() == Some(0);
    let mut rows = Vec::new();
    for (p, values, w) in load_oracle().into_iter().filter(|r| r.0 > 2) {
        let g = Arc::new(enumerate_group(2, p).unwrap());
        let got = width(&comm, &g).unwrap();
        ok &= got.value_set_size == values && got.exact() == Some(w);
        rows.push(format!("p={p} |V|={} w={:?}", got.value_set_size, got.exact()));
    }
    verdict(ok && within(t, Duration::from_secs(120)), format!("F_2 |V|={} w=1; x1^12 w=0; {}; {:?}", brute.len(), rows.join(", "), t.elapsed()))
}

fn random_symmetric(table: &Arc<FiniteGroupTable>, rng: &mut ChaCha8Rng) -> SymSet {
    let k = rng.gen_range(1..=4);
    let xs: Vec<u32> = (0..k).map(|_| rng.gen_range(0..table.len() as u32)).collect();
    let s = SymSet::from_ordinals(table, xs).symmetrize();
    if rng.gen_bool(0.5) {
        s.conjugation_closure()
    } else {
        s
    }
}

fn cover_bound() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let groups: Vec<Arc<FiniteGroupTable>> = [(2usize, 3u64), (2, 4), (2, 5), (2, 7), (2, 8), (2, 9), (3, 2), (2, 11)]
        .iter()
        .map(|&(n, m)| Arc::new(enumerate_group(n, m).unwrap()))
        .collect();
    let (mut bad, mut max_d) = (0, 0);
    for k in 0..50 {
        let table = &groups[k % groups.len()];
        let x = random_symmetric(table, &mut rng);
        let d = greedy_cover(&x).unwrap().len();
        max_d = max_d.max(d);
        if power_product(&x, 4 * d + 2) != closure(&x) {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("50 sets, {bad} failures, largest cover {max_d}"))
}

fn differential_rank() -> Verdict {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rows = Vec::new();
    let mut ok = true;
    for p in [2u64, 3, 5] {
        let table = Arc::new(enumerate_group(3, p).unwrap());
        let (mut found, mut bad) = (0, 0);
        while found < 100 {
            let a = table.element(rng.gen_range(0..table.len() as u32));
            let b = table.element(rng.gen_range(0..table.len() as u32));
            if !generates(&a, &b, &table).unwrap() {
                continue;
            }
            found += 1;
            if diff_rank(&a, &b).unwrap() != 8 {
                bad += 1;
            }
        }
        ok &= bad == 0;
        rows.push(format!("F_{p}: {bad} bad"));
    }
    verdict(ok && within(t, Duration::from_secs(60)), format!("{}, {:?}", rows.join(", "), t.elapsed()))
}

fn conjugate_sums() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut bad, mut rows) = (0, Vec::new());
    for p in [5u64, 7, 11, 13] {
        for n in [2usize, 3] {
            let mut most = 0;
            for s in 0..100 {
                let a = loop {
                    let m = LieMatrix::new(random_lie(n, p, &mut rng)).unwrap();
                    if !m.is_central() {
                        break m;
                    }
                };
                let b = LieMatrix::new(random_lie(n, p, &mut rng)).unwrap();
                let d = conj_sum_decompose(&a, &b, s).unwrap();
                if d.sum(&a).unwrap() != *b.matrix() || d.terms() > ladder_bound(n, p) {
                    bad += 1;
                }
                most = most.max(d.terms());
            }
            rows.push(format!("p={p} n={n} max {most}/{}", ladder_bound(n, p)));
        }
    }
    verdict(bad == 0, format!("{bad} failures; {}", rows.join(", ")))
}

fn random_map(s: usize, t: usize, rng: &mut ChaCha8Rng) -> PolyMapDescriptor {
    let coords = (0..t)
        .map(|_| {
            let mut f = Poly::zero(s);
            for _ in 0..rng.gen_range(1..=4) {
                let e: Vec<u32> = (0..s).map(|_| rng.gen_range(0..=2)).collect();
                f = f.add(&Poly::monomial(e, rng.gen_range(-5..=5i64)));
            }
            for i in 0..s {
                if rng.gen_bool(0.5) {
                    f = f.add(&Poly::monomial((0..s).map(|k| (k == i) as u32).collect(), rng.gen_range(-3..=3i64)));
                }
            }
            f
        })
        .collect();
    PolyMapDescriptor::new(s, coords).unwrap()
}

fn full_rank_mod(rows: &[Vec<u64>], p: u64) -> bool {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, r);
        let inv = (1..p).find(|x| x * m[rank][c] % p == 1).unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][c] % p != 0 {
                let f = m[r][c] * inv % p;
                for k in 0..cols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank == m.len()
}

fn newton() -> Verdict {
    let sq = PolyMapDescriptor::parse("x1^2", Some(1)).unwrap();
    let worked = newton_lift(&sq, &[1], &[7], 3, 0, 5).map(|l| l.point == [175]).unwrap_or(false);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut done, mut bad) = (0, 0);
    while done < 500 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let precision = rng.gen_range(2..=6u32);
        let s = rng.gen_range(1..=3);
        let t = rng.gen_range(1..=s);
        let f = random_map(s, t, &mut rng);
        let m = p.pow(precision);
        let x: Vec<u64> = (0..s).map(|_| rng.gen_range(0..m)).collect();
        if !full_rank_mod(&f.jacobian_mod(&x, p), p) {
            continue;
        }
        let b = f.eval_mod(&x, m);
        let a: Vec<u64> = x.iter().map(|&v| (v + p * rng.gen_range(0..m)) % m).collect();
        done += 1;
        match newton_lift(&f, &a, &b, p, 0, precision) {
            Ok(l) if f.eval_mod(&l.point, m) == b => {}
            _ => bad += 1,
        }
    }
    verdict(worked && bad == 0, format!("x^2 = 7 -> 175: {worked}; {done} random instances, {bad} failures"))
}

fn covers() -> Verdict {
    let t = Instant::now();
    let mut rows = Vec::new();
    let mut ok = true;
    for w in ["[x1,x2]", "x1^2"] {
        let word = parse_word(w).unwrap();
        for p in [2u64, 3] {
            let mut passed = None;
            for seed in 1..=5 {
                let c = word_coset_cover(&word, 3, p, 3, 200, seed).unwrap();
                if c.status == CoverStatus::Pass && c.verify().passed() && c.exponent() <= 7 && c.successes() == 200 {
                    passed = Some((seed, c.exponent()));
                    break;
                }
            }
            ok &= passed.is_some();
            rows.push(match passed {
                Some((seed, e)) => format!("{w} p={p} seed {seed} exponent {e}"),
                None => format!("{w} p={p} no passing seed"),
            });
        }
    }
    verdict(ok, format!("{}, {:?}", rows.join("; "), t.elapsed()))
}

fn padic_bounds() -> Verdict {
    let t = Instant::now();
    let table = Arc::new(enumerate_group(3, 4).unwrap());
    let mut ok = table.len() == 43_008;
    let mut rows = Vec::new();
    for a in [1i64, 2] {
        let e = ModMatrix::from_signed(3, 4, &[1, a, 0, 0, 1, 0, 0, 0, 1]);
        let x = SymSet::from_matrices(&table, &[e]).unwrap().symmetrize().conjugation_closure();
        let b = padic_width_bound(&x).unwrap();
        let oracle = closure_exponent(&x);
        ok &= b.bound >= oracle;
        rows.push(format!("e12({a}) class |X|={}: bound {} >= {oracle}", x.len(), b.bound));
    }
    verdict(ok && within(t, Duration::from_secs(300)), format!("{}, {:?}", rows.join("; "), t.elapsed()))
}

fn constant_bookkeeping() -> Verdict {
    let chain = constant_chain();
    let value = |name: &str| chain.iter().find(|s| s.name == name).map(|s| s.value);
    let cited = chain.iter().all(|s| !s.basis.is_empty());
    let ok = value("congruence bound") == Some(16 * 5)
        && value("global bound") == Some(16 * 5 + 7)
        && value("congruence bound") == Some(80)
        && value("global bound") == Some(87)
        && cited;
    let rows: Vec<String> = chain.iter().map(|s| format!("{}={}", s.name, s.value)).collect();
    verdict(ok, rows.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("relation engine", relation_engine),
        ("block certificates", block_certificates),
        ("LU3U pipeline", pipeline),
        ("Mennicke predicate", mennicke),
        ("width oracle", widths),
        ("cover power bound", cover_bound),
        ("differential rank", differential_rank),
        ("conjugate sums", conjugate_sums),
        ("Newton lift", newton),
        ("coset covers", covers),
        ("p-adic bound", padic_bounds),
        ("constant chain", constant_bookkeeping),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let v = run();
        println!("{} criterion {:>2} {name}: {}", if v.ok { "PASS" } else { "FAIL" }, k + 1, v.detail);
        failed += !v.ok as usize;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
