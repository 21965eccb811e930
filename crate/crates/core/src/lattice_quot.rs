//! Quotients of representation rings by orientability relations.
//!
//! The image of `J` at each level is `Z^n / Λ` where `Λ` is spanned by the
//! relation rows. Coordinates are reported against a fixed list of
//! generators chosen to match the usual presentation: the class of `1`
//! and, for `C4`, the class of `7 + σ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::abgroup::{AbGroup, Subquotient};
use crate::rep_ring::{self, Group, VirtualRep};
use crate::zmat::{self, Int, Lattice, Mat, Snf};
use crate::{Error, Result};


/// `(D, U, V)` with `U * M * V = D`.
pub fn snf(m: &Mat) -> Snf {
    zmat::snf(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    pub group: Group,
    pub ambient_rank: usize,
    pub relations: Mat,
    /// Nontrivial invariant factors, each dividing the next.
    pub invariant_factors: Vec<Int>,
    pub free_rank: usize,
    /// Canonical generators as ambient vectors, largest order first.
    pub generators: Vec<Vec<Int>>,
    /// Orders of the canonical generators.
    pub orders: Vec<Int>,
    /// `ambient_rank x generators` matrix: row `i` is the canonical
    /// coordinate vector of the `i`-th basis vector.
    pub projection: Mat,
}

impl QuotientGroup {
    /// Builds the quotient and solves for canonical coordinates against
    /// `generators`. Each generator's order is read off the quotient; the
    /// list must generate freely (checked by counting).
    pub fn new(group: Group, relations: &[Vec<Int>], generators: &[Vec<Int>]) -> Result<Self> {
        let n = group.rank();
        if relations.iter().chain(generators).any(|r| r.len() != n) {
            return Err(Error::GroupMismatch);
        }
        let rel_lat = Lattice::from_gens(n, relations.iter().cloned());
        let sq = Subquotient::new(&Lattice::full(n), &rel_lat);
        let abs = sq.group();
        if abs.free_rank > 0 {
            return Err(Error::Inconsistent("quotient is not finite".into()));
        }
        let orders: Vec<Int> = generators.iter().map(|g| sq.element_order(g)).collect();
        let product = orders.iter().fold(1, |a, b| zmat::mul(a, *b));
        if product != abs.torsion_order() {
            return Err(Error::Inconsistent("chosen generators do not split the quotient".into()));
        }
        let mut projection = Mat::zeros(n, generators.len());
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            let c = search_coords(&rel_lat, &e, generators, &orders)
                .ok_or_else(|| Error::Inconsistent("chosen generators do not span".into()))?;
            for (j, v) in c.iter().enumerate() {
                projection.set(i, j, *v);
            }
        }
        Ok(QuotientGroup {
            group,
            ambient_rank: n,
            relations: Mat::from_rows(n, relations),
            invariant_factors: abs.torsion.clone(),
            free_rank: abs.free_rank,
            generators: generators.to_vec(),
            orders,
            projection,
        })
    }

    pub fn abgroup(&self) -> AbGroup {
        AbGroup { free_rank: self.free_rank, torsion: self.invariant_factors.clone() }
    }

    pub fn order(&self) -> Int {
        self.abgroup().torsion_order()
    }

    /// Canonical coordinates of an ambient vector.
    pub fn reduce_coords(&self, v: &[Int]) -> Vec<Int> {
        let mut c = self.projection.apply(v);
        for (x, o) in c.iter_mut().zip(&self.orders) {
            *x = x.rem_euclid(*o);
        }
        c
    }

    pub fn add_coords(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), o)| (x + y).rem_euclid(*o)).collect()
    }

    pub fn scale_coords(&self, a: &[Int], k: Int) -> Vec<Int> {
        a.iter().zip(&self.orders).map(|(x, o)| zmat::mul(*x, k).rem_euclid(*o)).collect()
    }

    /// Ambient representative of canonical coordinates.
    pub fn lift(&self, c: &[Int]) -> Vec<Int> {
        zmat::combine(&self.generators, c, self.ambient_rank)
    }
}

/// Brute force over the finite box of coordinates; the box has at most
/// `|G|` points, which is 64 here.
fn search_coords(rel: &Lattice, v: &[Int], gens: &[Vec<Int>], orders: &[Int]) -> Option<Vec<Int>> {
    let mut c = vec![0; gens.len()];
    loop {
        let mut diff = v.to_vec();
        for (g, k) in gens.iter().zip(&c) {
            zmat::axpy(&mut diff, -k, g);
        }
        if rel.contains(&diff) {
            return Some(c);
        }
        let mut i = 0;
        loop {
            if i == c.len() {
                return None;
            }
            c[i] += 1;
            if c[i] < orders[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// Default relation rows for each level.
pub fn default_relations(group: Group) -> Vec<Vec<Int>> {
    match group {
        Group::C4 => vec![vec![16, 0, -8], vec![4, -4, 0], vec![10, -2, -4], vec![1, 1, 1]],
        Group::C2 => vec![vec![8, -8], vec![1, 1]],
        Group::Trivial => vec![vec![2]],
    }
}

/// Default canonical generators: `1` and, for `C4`, `7 + σ`.
pub fn default_generators(group: Group) -> Vec<Vec<Int>> {
    match group {
        Group::C4 => vec![vec![1, 0, 0], vec![7, 1, 0]],
        Group::C2 => vec![vec![1, 0]],
        Group::Trivial => vec![vec![1]],
    }
}

pub fn j_image(group: Group) -> QuotientGroup {
    QuotientGroup::new(group, &default_relations(group), &default_generators(group))
        .expect("built-in relations are consistent")
}

pub fn reduce(q: &QuotientGroup, v: &VirtualRep) -> Result<Vec<Int>> {
    if v.group != q.group {
        return Err(Error::GroupMismatch);
    }
    Ok(q.reduce_coords(&v.coords))
}

/// `Some(d)` with `reduce(v) = d * reduce(1)`, `d` minimal, else `None`.
pub fn is_integer_shift(q: &QuotientGroup, v: &VirtualRep) -> Result<Option<Int>> {
    let target = reduce(q, v)?;
    let one = reduce(q, &VirtualRep::one(q.group))?;
    let bound = q.order();
    for d in 0..bound {
        if q.scale_coords(&one, d) == target {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicLowerBound {
    /// Levels `C4/C4`, `C4/C2`, `C4/e`.
    pub levels: [QuotientGroup; 3],
    /// `res_top_mid`, `res_mid_bot` in canonical coordinates (rows are
    /// images of source generators).
    pub res: [Mat; 2],
    /// `tr_mid_top`, `tr_bot_mid`.
    pub tr: [Mat; 2],
}

fn map_matrix(
    src: &QuotientGroup,
    dst: &QuotientGroup,
    f: impl Fn(&VirtualRep) -> Result<VirtualRep>,
) -> Result<Mat> {
    // well defined: relations go to zero
    for r in src.relations.row_vecs() {
        let img = f(&VirtualRep::new(src.group, r))?;
        if !is_zero_coords(&reduce(dst, &img)?) {
            return Err(Error::Inconsistent("relation does not map to a relation".into()));
        }
    }
    let mut m = Mat::zeros(src.generators.len(), dst.generators.len());
    for (i, g) in src.generators.iter().enumerate() {
        let c = reduce(dst, &f(&VirtualRep::new(src.group, g.clone()))?)?;
        for (j, v) in c.iter().enumerate() {
            m.set(i, j, *v);
        }
    }
    Ok(m)
}

fn is_zero_coords(c: &[Int]) -> bool {
    c.iter().all(|x| *x == 0)
}

pub fn pic_lower_bound_from(levels: [QuotientGroup; 3]) -> Result<PicLowerBound> {
    let [top, mid, bot] = &levels;
    let res = [
        map_matrix(top, mid, |v| rep_ring::rr_restrict(v, mid.group))?,
        map_matrix(mid, bot, |v| rep_ring::rr_restrict(v, bot.group))?,
    ];
    let tr = [
        map_matrix(mid, top, |v| rep_ring::rr_induce(v, top.group))?,
        map_matrix(bot, mid, |v| rep_ring::rr_induce(v, mid.group))?,
    ];
    Ok(PicLowerBound { levels, res, tr })
}

pub fn pic_lower_bound_mackey() -> PicLowerBound {
    pic_lower_bound_from([j_image(Group::C4), j_image(Group::C2), j_image(Group::Trivial)])
        .expect("built-in levels are consistent")
}

impl PicLowerBound {
    /// Applies a level map to canonical coordinates.
    pub fn apply(&self, m: &Mat, target: &QuotientGroup, c: &[Int]) -> Vec<Int> {
        target.reduce_coords(&target.lift(&m.apply(c)))
    }

    /// Checks `tr(res(x)) = x * [Ind 1]` on every generator of the upper
    /// level of each pair, where `Ind 1` is the induced trivial
    /// representation. For `J` this is the Frobenius form of the index
    /// formula: the transfer of the unit is `Ind 1`, not the index.
    pub fn check_tr_res(&self) -> Result<()> {
        let pairs = [(0usize, 1usize), (1, 2)];
        for (k, (hi, lo)) in pairs.iter().enumerate() {
            let up = &self.levels[*hi];
            let down = &self.levels[*lo];
            let ind1 = rep_ring::rr_induce(&VirtualRep::one(down.group), up.group)?;
            for (i, g) in up.generators.iter().enumerate() {
                let mut e = vec![0; up.generators.len()];
                e[i] = 1;
                let r = self.apply(&self.res[k], down, &e);
                let tr = self.apply(&self.tr[k], up, &r);
                let expect = reduce(up, &rep_ring::rr_mul(&VirtualRep::new(up.group, g.clone()), &ind1)?)?;
                if tr != expect {
                    return Err(Error::Inconsistent("tr(res(x)) differs from x * Ind(1)".into()));
                }
            }
        }
        Ok(())
    }

    pub fn orders(&self) -> [Int; 3] {
        [self.levels[0].order(), self.levels[1].order(), self.levels[2].order()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep_ring::parse_expr;

    #[test]
    fn image_of_j() {
        let q4 = j_image(Group::C4);
        assert_eq!(q4.invariant_factors, vec![2, 32]);
        assert_eq!(q4.orders, vec![32, 2]);
        assert_eq!(j_image(Group::C2).invariant_factors, vec![16]);
        assert_eq!(j_image(Group::Trivial).invariant_factors, vec![2]);
    }

    #[test]
    fn coset_identities() {
        let q = j_image(Group::C4);
        let r = |s: &str| reduce(&q, &parse_expr(s).unwrap()).unwrap();
        assert_eq!(r("2*sigma - 2"), vec![16, 0]);
        assert_eq!(r("sigma - 1"), vec![24, 1]);
        assert_eq!(r("15 + sigma"), r("1 - sigma"));
        assert_eq!(r("1 - sigma"), vec![8, 1]);
        assert_eq!(is_integer_shift(&q, &parse_expr("sigma - 1").unwrap()).unwrap(), None);
        assert_eq!(is_integer_shift(&q, &VirtualRep::rho4()).unwrap(), Some(0));
        assert_eq!(is_integer_shift(&q, &parse_expr("10 - 2*sigma - 4*lambda").unwrap()).unwrap(), Some(0));
    }

    #[test]
    fn lower_bound_maps() {
        let p = pic_lower_bound_mackey();
        assert_eq!(p.tr[0].row(0), &[26, 1]);
        assert_eq!(p.res[0].col(0), vec![1, 8]);
        assert_eq!(p.tr[1].row(0), &[0]);
        assert_eq!(p.res[1].row(0), &[1]);
        p.check_tr_res().unwrap();
        assert_eq!(p.orders(), [64, 16, 2]);
    }

    #[test]
    fn bad_generators_rejected() {
        let e = QuotientGroup::new(Group::C4, &default_relations(Group::C4), &[vec![2, 0, 0], vec![7, 1, 0]]);
        assert!(e.is_err());
    }
}
