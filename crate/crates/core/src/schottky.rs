//! Marked Schottky configurations: two loxodromic maps with four closed
//! disks, `gamma1(D1) = complement(D1')` and `gamma2(D2) = complement(D2')`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::apollonius::concentric_centers;
use crate::disk::{Containment, GeneralizedDisk};
use crate::sphere::{MoebiusMap, SpherePoint};
use crate::{Error, Result};

/// Default certificate tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default margin demanded along traced loops.
pub const DEFAULT_MARGIN: f64 = 1e-6;

/// Largest accepted orbit depth.
pub const MAX_DEPTH: usize = 12;

/// Labels of the six disk pairs, in the order used by [`Certificate`].
pub const PAIR_LABELS: [&str; 6] = ["D1/D1'", "D1/D2", "D1/D2'", "D1'/D2", "D1'/D2'", "D2/D2'"];

#[derive(Clone, Copy, Debug)]
pub struct SchottkyConfig {
    pub gamma1: MoebiusMap,
    pub gamma2: MoebiusMap,
    pub d1: GeneralizedDisk,
    pub d1p: GeneralizedDisk,
    pub d2: GeneralizedDisk,
    pub d2p: GeneralizedDisk,
    /// Repelling fixed point of `gamma1`, expected in `D1`.
    pub f1: SpherePoint,
    /// Attracting fixed point of `gamma1`, expected in `D1'`.
    pub f1p: SpherePoint,
    pub f2: SpherePoint,
    pub f2p: SpherePoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub tol: f64,
    /// Disjointness margins of the pairs in [`PAIR_LABELS`] order.
    pub disjoint_margins: [f64; 6],
    pub disjoint_pass: [bool; 6],
    /// `same_circle` residuals of `gamma_i(D_i)` against `complement(D_i')`.
    pub circle_residuals: [f64; 2],
    pub circle_pass: [bool; 2],
    /// `gamma_i` sends the interior of `D_i` into the complement of `D_i'`.
    pub orientation_pass: [bool; 2],
    /// `f1 in D1`, `f1' in D1'`, `f2 in D2`, `f2' in D2'`, each also being
    /// the repelling/attracting fixed point of its map.
    pub fixed_point_pass: [bool; 4],
    pub min_margin: f64,
    pub verdict: bool,
}

impl Certificate {
    /// Passes and every disjointness margin is at least `margin`.
    pub fn passes_with_margin(&self, margin: f64) -> bool {
        self.verdict && self.min_margin >= margin
    }

    /// Short description of the first failed condition.
    pub fn first_failure(&self) -> Option<&'static str> {
        for (i, ok) in self.disjoint_pass.iter().enumerate() {
            if !ok {
                return Some(PAIR_LABELS[i]);
            }
        }
        if !self.circle_pass[0] {
            return Some("gamma1 circle");
        }
        if !self.circle_pass[1] {
            return Some("gamma2 circle");
        }
        if !self.orientation_pass[0] {
            return Some("gamma1 orientation");
        }
        if !self.orientation_pass[1] {
            return Some("gamma2 orientation");
        }
        const FP: [&str; 4] = ["f1", "f1'", "f2", "f2'"];
        for (i, ok) in self.fixed_point_pass.iter().enumerate() {
            if !ok {
                return Some(FP[i]);
            }
        }
        None
    }
}

impl SchottkyConfig {
    /// Configuration with fixed points read from the maps.
    pub fn from_maps(
        gamma1: MoebiusMap,
        gamma2: MoebiusMap,
        disks: [GeneralizedDisk; 4],
    ) -> Result<Self> {
        let (f1, f1p) = gamma1.fixed_points().map_err(|_| Error::NonLoxodromicGenerator)?;
        let (f2, f2p) = gamma2.fixed_points().map_err(|_| Error::NonLoxodromicGenerator)?;
        let [d1, d1p, d2, d2p] = disks;
        Ok(SchottkyConfig {
            gamma1,
            gamma2,
            d1,
            d1p,
            d2,
            d2p,
            f1,
            f1p,
            f2,
            f2p,
        })
    }

    pub fn disks(&self) -> [GeneralizedDisk; 4] {
        [self.d1, self.d1p, self.d2, self.d2p]
    }

    /// Everything moved by `t`: maps conjugated, disks and points
    /// transported.
    pub fn conjugate(&self, t: &MoebiusMap) -> SchottkyConfig {
        SchottkyConfig {
            gamma1: self.gamma1.conjugate_by(t),
            gamma2: self.gamma2.conjugate_by(t),
            d1: self.d1.transform(t),
            d1p: self.d1p.transform(t),
            d2: self.d2.transform(t),
            d2p: self.d2p.transform(t),
            f1: t.apply(self.f1),
            f1p: t.apply(self.f1p),
            f2: t.apply(self.f2),
            f2p: t.apply(self.f2p),
        }
    }
}

fn fixed_point_ok(
    map: &MoebiusMap,
    marked: SpherePoint,
    disk: &GeneralizedDisk,
    repelling: bool,
    tol: f64,
) -> bool {
    let Ok((rep, att)) = map.fixed_points() else {
        return false;
    };
    let actual = if repelling { rep } else { att };
    actual.chordal_distance(&marked) <= tol.max(1e-9) && disk.contains(marked) == Containment::Inside
}

/// Checks the four-disk conditions with tolerance `tol`.
pub fn certify(cfg: &SchottkyConfig, tol: f64) -> Result<Certificate> {
    if !cfg.gamma1.is_loxodromic() || !cfg.gamma2.is_loxodromic() {
        return Err(Error::NonLoxodromicGenerator);
    }
    let disks = cfg.disks();
    let mut disjoint_margins = [0.0; 6];
    let mut disjoint_pass = [false; 6];
    let mut k = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            let r = disks[i].disjoint(&disks[j]);
            disjoint_margins[k] = r.margin;
            disjoint_pass[k] = r.disjoint && r.margin > tol;
            k += 1;
        }
    }
    let maps = [(&cfg.gamma1, &cfg.d1, &cfg.d1p), (&cfg.gamma2, &cfg.d2, &cfg.d2p)];
    let mut circle_residuals = [0.0; 2];
    let mut circle_pass = [false; 2];
    let mut orientation_pass = [false; 2];
    for (i, (g, d, dp)) in maps.iter().enumerate() {
        let target = dp.complement();
        circle_residuals[i] = d.transform(g).circle_residual(&target);
        circle_pass[i] = circle_residuals[i] <= tol;
        orientation_pass[i] = target.contains(g.apply(d.interior_point())) == Containment::Inside;
    }
    let fixed_point_pass = [
        fixed_point_ok(&cfg.gamma1, cfg.f1, &cfg.d1, true, tol),
        fixed_point_ok(&cfg.gamma1, cfg.f1p, &cfg.d1p, false, tol),
        fixed_point_ok(&cfg.gamma2, cfg.f2, &cfg.d2, true, tol),
        fixed_point_ok(&cfg.gamma2, cfg.f2p, &cfg.d2p, false, tol),
    ];
    let min_margin = disjoint_margins.iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = disjoint_pass.iter().all(|&b| b)
        && circle_pass.iter().all(|&b| b)
        && orientation_pass.iter().all(|&b| b)
        && fixed_point_pass.iter().all(|&b| b);
    Ok(Certificate {
        tol,
        disjoint_margins,
        disjoint_pass,
        circle_residuals,
        circle_pass,
        orientation_pass,
        fixed_point_pass,
        min_margin,
        verdict,
    })
}

/// Result of the separating circle search.
#[derive(Clone, Copy, Debug)]
pub struct SeparatingCircle {
    pub found: bool,
    /// The circle as the disk containing the second pair of the partition.
    pub circle: Option<GeneralizedDisk>,
    /// Disk indices (`D1 = 0, D1' = 1, D2 = 2, D2' = 3`) of the two sides.
    pub partition: Option<([usize; 2], [usize; 2])>,
}

/// Radii tried per candidate pair.
const SCAN_STEPS: usize = 200;

/// Looks for a circle with two of the four disks on each side. For each
/// balanced partition and each pair of disks taken across it, the pair is
/// made concentric and the concentric circles between them are scanned.
pub fn separating_circle_check(cfg: &SchottkyConfig) -> SeparatingCircle {
    let disks = cfg.disks();
    let partitions = [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];
    for (left, right) in partitions {
        for &x in &left {
            for &y in &right {
                let x2 = if left[0] == x { left[1] } else { left[0] };
                let y2 = if right[0] == y { right[1] } else { right[0] };
                let Ok(pair) = concentric_centers(&disks[x], &disks[y]) else {
                    continue;
                };
                let t = pair.normalizing_map();
                let (inner, outer) = pair.concentric_radii();
                if !(inner > 0.0 && outer > inner) {
                    continue;
                }
                let (tx2, ty2) = (disks[x2].transform(&t), disks[y2].transform(&t));
                let back = t.inverse();
                let ratio = (outer / inner).ln();
                for s in 1..SCAN_STEPS {
                    let rho = inner * (ratio * s as f64 / SCAN_STEPS as f64).exp();
                    let Ok(c) = GeneralizedDisk::from_center_radius(num_complex::Complex64::new(0.0, 0.0), rho) else {
                        continue;
                    };
                    if c.contains_disk(&ty2).disjoint && c.disjoint(&tx2).disjoint {
                        return SeparatingCircle {
                            found: true,
                            circle: Some(c.transform(&back)),
                            partition: Some((left, right)),
                        };
                    }
                }
            }
        }
    }
    SeparatingCircle {
        found: false,
        circle: None,
        partition: None,
    }
}

/// Generators and their inverses, in alphabet order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    G1,
    G1Inv,
    G2,
    G2Inv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::G1, Letter::G1Inv, Letter::G2, Letter::G2Inv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::G1 => Letter::G1Inv,
            Letter::G1Inv => Letter::G1,
            Letter::G2 => Letter::G2Inv,
            Letter::G2Inv => Letter::G2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::G1 => 'a',
            Letter::G1Inv => 'A',
            Letter::G2 => 'b',
            Letter::G2Inv => 'B',
        }
    }

    pub fn map(self, cfg: &SchottkyConfig) -> MoebiusMap {
        match self {
            Letter::G1 => cfg.gamma1,
            Letter::G1Inv => cfg.gamma1.inverse(),
            Letter::G2 => cfg.gamma2,
            Letter::G2Inv => cfg.gamma2.inverse(),
        }
    }

    /// The disk this letter maps the outside of its inverse's disk into.
    pub fn attracting_disk(self, cfg: &SchottkyConfig) -> GeneralizedDisk {
        match self {
            Letter::G1 => cfg.d1p,
            Letter::G1Inv => cfg.d1,
            Letter::G2 => cfg.d2p,
            Letter::G2Inv => cfg.d2,
        }
    }
}

/// Reduced words of length exactly `len`, lexicographic in [`Letter`]
/// order.
pub fn reduced_words(len: usize) -> Vec<Vec<Letter>> {
    let mut words: Vec<Vec<Letter>> = alloc::vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(words.len() * 3);
        for w in &words {
            for l in Letter::ALL {
                if w.last().is_some_and(|&x| x == l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        words = next;
    }
    words
}

/// `w(p)`, applying the letters right to left one at a time.
pub fn apply_word(cfg: &SchottkyConfig, word: &[Letter], p: SpherePoint) -> SpherePoint {
    word.iter().rev().fold(p, |q, l| l.map(cfg).apply(q))
}

/// The disk `x1 ... x_{n-1} (Att(x_n))` that contains every point of the
/// word `x1 ... xn`.
pub fn word_disk(cfg: &SchottkyConfig, word: &[Letter]) -> Option<GeneralizedDisk> {
    let (last, prefix) = word.split_last()?;
    Some(prefix.iter().rev().fold(last.attracting_disk(cfg), |d, l| d.transform(&l.map(cfg))))
}

#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub word: Vec<Letter>,
    /// The letter whose attracting disk holds the seed.
    pub seed: Letter,
    pub point: SpherePoint,
}

/// Images of the four disk centers under reduced words up to `depth`.
///
/// A word `w` is applied to the seed in `Att(y)` only when `w y` is
/// reduced, so every emitted point lies in the disk of `w y`. Depth 0 gives
/// the four seeds.
pub fn orbit_sample(cfg: &SchottkyConfig, depth: usize) -> Result<Vec<OrbitPoint>> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge(depth));
    }
    let seeds: Vec<(Letter, SpherePoint)> = Letter::ALL
        .iter()
        .map(|&l| (l, l.attracting_disk(cfg).interior_point()))
        .collect();
    let mut out = Vec::new();
    for len in 0..=depth {
        for w in reduced_words(len) {
            for &(y, p) in &seeds {
                if w.last().is_some_and(|&x| x == y.inverse()) {
                    continue;
                }
                out.push(OrbitPoint {
                    point: apply_word(cfg, &w, p),
                    word: w.clone(),
                    seed: y,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct NestingReport {
    /// Number of reduced words of each length `1..=depth`.
    pub words_per_length: Vec<usize>,
    pub points_checked: usize,
    pub point_violations: usize,
    pub disk_checks: usize,
    pub disk_violations: usize,
}

impl NestingReport {
    pub fn pass(&self) -> bool {
        self.point_violations == 0 && self.disk_violations == 0
    }
}

/// Checks that every orbit point of a word of length `d + 1` lies in the
/// disk of its length-`d` prefix (and of the word itself), and that word
/// disks are nested.
pub fn check_nesting(cfg: &SchottkyConfig, depth: usize) -> Result<NestingReport> {
    let points = orbit_sample(cfg, depth)?;
    let mut rep = NestingReport::default();
    for len in 1..=depth {
        let words = reduced_words(len);
        rep.words_per_length.push(words.len());
        if len >= 2 {
            for w in &words {
                let (Some(inner), Some(outer)) = (word_disk(cfg, w), word_disk(cfg, &w[..len - 1])) else {
                    continue;
                };
                rep.disk_checks += 1;
                if !outer.contains_disk(&inner).disjoint {
                    rep.disk_violations += 1;
                }
            }
        }
    }
    for p in &points {
        if p.word.is_empty() {
            continue;
        }
        let mut full = p.word.clone();
        full.push(p.seed);
        for disk in [word_disk(cfg, &full), word_disk(cfg, &p.word)].into_iter().flatten() {
            rep.points_checked += 1;
            if disk.contains(p.point) != Containment::Inside {
                rep.point_violations += 1;
            }
        }
    }
    Ok(rep)
}

/// Ping-pong margins: each letter maps the three disks other than the
/// attracting disk of its inverse into its own attracting disk. Returns
/// the smallest containment margin (positive when all hold).
pub fn ping_pong_margin(cfg: &SchottkyConfig) -> f64 {
    let mut worst = f64::INFINITY;
    for l in Letter::ALL {
        let target = l.attracting_disk(cfg);
        let g = l.map(cfg);
        for other in Letter::ALL {
            if other == l.inverse() {
                continue;
            }
            let img = other.attracting_disk(cfg).transform(&g);
            worst = worst.min(target.contains_disk(&img).margin);
        }
    }
    worst
}
