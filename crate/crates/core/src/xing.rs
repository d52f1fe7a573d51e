//! Nonlinear codes from derivatives of sections: keep the `f in L(D)` whose
//! first `m` derivative words `phi_0(f), ..., phi_(m-1)(f)` lie in balls of
//! radii `s_r` around chosen centers, then publish `phi_m(f)`.
//!
//! With integral radii the guaranteed distance is
//! `d0 = (m+1)N - 2 sum_r (m+1-r) s_r - deg D`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::center::{SearchProblem, Strategy};
use crate::code::{Alphabet, Code, CodeMeta, Word};
use crate::curve::{Curve, CurveFunction, Divisor, Point};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::goppa::{check_points, combination, points_off_support, space_size, MAX_SPACE_SIZE};

/// The `r`-th expansion coefficient of `f` at each point, in the canonical uniformizers.
pub fn phi_r(curve: &Curve, f: &CurveFunction, points: &[Point], r: usize) -> Result<Word> {
    points
        .iter()
        .map(|p| Ok(curve.local_expand(f, p, r)?.coefficients[r]))
        .collect()
}

/// Expansion coefficients `0..=r_max` of every basis function at every point.
/// Since expansion is linear, the data of any element of the span follows
/// by combining rows.
#[derive(Clone, Debug)]
pub struct ExpansionTable {
    field: Field,
    n: usize,
    r_max: usize,
    /// `table[b][j][r]`
    table: Vec<Vec<Vec<u32>>>,
}

impl ExpansionTable {
    pub fn new(curve: &Curve, basis: &[CurveFunction], points: &[Point], r_max: usize) -> Result<Self> {
        let table = basis
            .iter()
            .map(|f| {
                points
                    .iter()
                    .map(|p| Ok(curve.local_expand(f, p, r_max)?.coefficients))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpansionTable {
            field: curve.field().clone(),
            n: points.len(),
            r_max,
            table,
        })
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn phi(&self, coeffs: &[u32], r: usize) -> Word {
        let f = &self.field;
        let mut w = vec![0; self.n];
        for (&c, rows) in coeffs.iter().zip(&self.table) {
            if c != 0 {
                for (x, row) in w.iter_mut().zip(rows) {
                    *x = f.add(*x, f.mul(c, row[r]));
                }
            }
        }
        w
    }

    /// Expansion of the combination at point `j`.
    pub fn expansion(&self, coeffs: &[u32], j: usize) -> Vec<u32> {
        let f = &self.field;
        let mut e = vec![0; self.r_max + 1];
        for (&c, rows) in coeffs.iter().zip(&self.table) {
            if c != 0 {
                for (x, &v) in e.iter_mut().zip(&rows[j]) {
                    *x = f.add(*x, f.mul(c, v));
                }
            }
        }
        e
    }
}

#[derive(Clone, Debug)]
pub struct XingParams {
    pub divisor: Divisor,
    pub m: usize,
    pub radii: Vec<usize>,
    /// Evaluation points; defaults to every rational point off `supp(D)`.
    pub points: Option<Vec<Point>>,
    pub strategy: Strategy,
    /// Fixed centers, bypassing the search.
    pub centers: Option<Vec<Word>>,
}

#[derive(Clone, Debug)]
pub struct XingResult {
    pub code: Code,
    pub centers: Vec<Word>,
    /// Coefficient vectors (in the Riemann-Roch basis) of the survivors.
    pub survivors: Vec<Vec<u32>>,
    pub space_size: u64,
    pub average: BigRational,
    pub d0: i64,
    pub basis: Vec<CurveFunction>,
    pub expansions: ExpansionTable,
    pub m: usize,
    pub radii: Vec<usize>,
    pub degree: i64,
}

/// `(m+1)N - 2 sum_{r<m} (m+1-r) s_r - deg D`.
pub fn xing_d0(n: usize, m: usize, radii: &[usize], deg: i64) -> i64 {
    let spent: i64 = radii
        .iter()
        .enumerate()
        .map(|(r, &s)| (m + 1 - r) as i64 * s as i64)
        .sum();
    (m as i64 + 1) * n as i64 - 2 * spent - deg
}

pub fn build_xing(curve: &Curve, params: &XingParams) -> Result<XingResult> {
    let d = &params.divisor;
    curve.check_divisor(d)?;
    let m = params.m;
    if m == 0 {
        return Err(Error::precondition("m must be positive"));
    }
    if params.radii.len() != m {
        return Err(Error::precondition(format!(
            "expected {m} radii, got {}",
            params.radii.len()
        )));
    }
    let points = params.points.clone().unwrap_or_else(|| points_off_support(curve, d));
    check_points(curve, d, &points)?;
    let n = points.len();
    let field = curve.field();
    let q = field.order();
    for (r, &s) in params.radii.iter().enumerate() {
        // s_r < N (q-1)/q
        if s as u64 * q as u64 >= n as u64 * (q as u64 - 1) {
            return Err(Error::precondition(format!(
                "radius s_{r} = {s} must be below N(q-1)/q"
            )));
        }
    }
    let deg = d.degree();
    let d0 = xing_d0(n, m, &params.radii, deg);
    if d0 <= 0 {
        return Err(Error::precondition(format!(
            "deg D = {deg} leaves no distance: d0 = {d0} must be positive"
        )));
    }
    let basis = curve.riemann_roch_basis(d)?;
    let size = space_size(q, basis.len(), MAX_SPACE_SIZE)?;
    let r_max = m.max(deg.max(0) as usize);
    let expansions = ExpansionTable::new(curve, &basis, &points, r_max)?;

    let coeffs: Vec<Vec<u32>> = (0..size).map(|k| combination(q, k, basis.len())).collect();
    let items: Vec<Vec<Word>> = coeffs
        .iter()
        .map(|c| (0..m).map(|r| expansions.phi(c, r)).collect())
        .collect();
    let problem = SearchProblem {
        alphabet: q,
        n,
        radii: &params.radii,
        items: &items,
    };
    let (centers, survivor_idx, strategy_label) = match &params.centers {
        Some(c) => {
            if c.len() != m || c.iter().any(|w| w.len() != n || w.iter().any(|&s| s >= q)) {
                return Err(Error::precondition("fixed centers must be m words of length N over k"));
            }
            (c.clone(), problem.survivors(c), "fixed".to_owned())
        }
        None => {
            let out = problem.search(params.strategy)?;
            (out.centers, out.survivors, params.strategy.label().to_owned())
        }
    };
    let survivors: Vec<Vec<u32>> = survivor_idx.iter().map(|&i| coeffs[i].clone()).collect();
    let words: Vec<Word> = survivors.iter().map(|c| expansions.phi(c, m)).collect();
    let meta = CodeMeta {
        construction: "xing".into(),
        alphabet: Alphabet::Field,
        points,
        params: json!({
            "curve": curve.kind().to_string(),
            "divisor": d.to_string(),
            "m": m,
            "radii": params.radii,
            "strategy": strategy_label,
            "centers": centers,
            "space_size": size,
            "d0": d0,
        }),
        claimed_distance: Some(d0),
    };
    let code = Code::new(field, meta, words)?;
    Ok(XingResult {
        code,
        centers,
        survivors,
        space_size: size,
        average: problem.exact_average(),
        d0,
        basis,
        expansions,
        m,
        radii: params.radii.clone(),
        degree: deg,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    pub pairs: usize,
    /// Largest total agreement multiplicity seen at the evaluation points.
    pub max_multiplicity: usize,
    /// Largest `#I_m` seen.
    pub max_agree_m: usize,
    /// Pairs violating `#I_r >= N - 2 s_r`, the counting chain,
    /// `multiplicity <= deg D`, or `#I_m <= N - d0`.
    pub violations: usize,
}

impl XingResult {
    /// The word tuples `(phi_0(f), ..., phi_(m-1)(f))` for every `f` in `L(D)`,
    /// in enumeration order.
    pub fn source_items(&self) -> Vec<Vec<Word>> {
        let q = self.code.field().order();
        (0..self.space_size)
            .map(|k| {
                let c = combination(q, k, self.basis.len());
                (0..self.m).map(|r| self.expansions.phi(&c, r)).collect()
            })
            .collect()
    }

    /// Audits the distance argument on up to `max_pairs` survivor pairs
    /// (all pairs if there are fewer), sampled with the given seed.
    pub fn chain_check(&self, max_pairs: usize, seed: u64) -> ChainReport {
        let k = self.survivors.len();
        let total = k * k.saturating_sub(1) / 2;
        let pairs: Vec<(usize, usize)> = if total <= max_pairs {
            (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..max_pairs)
                .map(|_| {
                    let i = rng.random_range(0..k);
                    let mut j = rng.random_range(0..k - 1);
                    if j >= i {
                        j += 1;
                    }
                    (i.min(j), i.max(j))
                })
                .collect()
        };
        let n = self.code.length();
        let field = self.code.field();
        let mut report = ChainReport::default();
        for (a, b) in pairs {
            let diff: Vec<u32> = self.survivors[a]
                .iter()
                .zip(&self.survivors[b])
                .map(|(&x, &y)| field.sub(x, y))
                .collect();
            // multiplicity at P_j = order of vanishing of f - f'
            let mut total_mult = 0;
            let mut agree = vec![0usize; self.m + 1];
            let mut chain = 0;
            for j in 0..n {
                let e = self.expansions.expansion(&diff, j);
                let v = e.iter().position(|&c| c != 0).unwrap_or(e.len());
                total_mult += v;
                for (r, slot) in agree.iter_mut().enumerate() {
                    if e[r] == 0 {
                        *slot += 1;
                    }
                }
                chain += v.min(self.m + 1);
            }
            let mut bad = total_mult as i64 > self.degree;
            bad |= agree[self.m] as i64 > n as i64 - self.d0;
            for (r, &s) in self.radii.iter().enumerate() {
                bad |= agree[r] + 2 * s < n;
            }
            // sum_{s<=m} #(I_0 ∩ ... ∩ I_s) >= (m+1)N - sum_r (m+1-r)(N - #I_r)
            let rhs: i64 = (self.m as i64 + 1) * n as i64
                - (0..=self.m)
                    .map(|r| (self.m + 1 - r) as i64 * (n - agree[r]) as i64)
                    .sum::<i64>();
            bad |= (chain as i64) < rhs;
            report.pairs += 1;
            report.max_multiplicity = report.max_multiplicity.max(total_mult);
            report.max_agree_m = report.max_agree_m.max(agree[self.m]);
            report.violations += bad as usize;
        }
        report
    }

    /// Whether `phi_m` separates all survivors (it must when `d0 > 0`).
    pub fn is_injective(&self) -> bool {
        self.code.len() == self.survivors.len()
    }
}
