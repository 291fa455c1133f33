//! Brute-force Hom and center computations used as independent references.
//!
//! Chain maps and homotopies are unknown coefficient vectors over basis
//! paths, indexed in reverse order (top degree and last path first), and
//! all elimination is done by the small dense routine below rather than by
//! the library's solver.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nakayama_core::complex::{Block, ChainMap, ProjComplex};
use nakayama_core::pathalg::{AlgElem, Algebra};

type Slot = (i64, usize, usize, usize);

/// Coordinates for maps `X^n -> Y^{n+k}`.
pub struct Slots {
    pub k: i64,
    pub slots: Vec<Slot>,
    index: HashMap<Slot, usize>,
}

impl Slots {
    pub fn new(alg: &Algebra, x: &ProjComplex, y: &ProjComplex, k: i64) -> Self {
        let mut slots = Vec::new();
        if let (Some((a, b)), Some(_)) = (x.support(), y.support()) {
            for n in (a..=b).rev() {
                let (xs, ys) = (x.term(n), y.term(n + k));
                for s in (0..xs.len()).rev() {
                    for t in (0..ys.len()).rev() {
                        for &p in alg.pres.paths_between(ys[t], xs[s]).iter().rev() {
                            slots.push((n, s, t, p));
                        }
                    }
                }
            }
        }
        let index = slots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Slots { k, slots, index }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    /// Blocks `X^n -> Y^{n+k}` of a coefficient vector.
    pub fn blocks(&self, alg: &Algebra, x: &ProjComplex, y: &ProjComplex, v: &[u32]) -> BTreeMap<i64, Block> {
        let mut out: BTreeMap<i64, Block> = BTreeMap::new();
        for (&(n, s, t, p), &c) in self.slots.iter().zip(v) {
            let b = out.entry(n).or_insert_with(|| zero_block(x.term(n), y.term(n + self.k)));
            if c != 0 {
                b[s][t] = alg.add(&b[s][t], &alg.scale(c, &alg.path_elem(p)));
            }
        }
        out
    }

    pub fn encode_blocks(&self, blocks: &BTreeMap<i64, Block>) -> Vec<u32> {
        let mut v = vec![0; self.len()];
        for (&n, b) in blocks {
            for (s, row) in b.iter().enumerate() {
                for (t, e) in row.iter().enumerate() {
                    for &(p, c) in &e.terms {
                        v[self.index[&(n, s, t, p)]] = c;
                    }
                }
            }
        }
        v
    }

    pub fn decode(&self, alg: &Algebra, x: &Arc<ProjComplex>, y: &Arc<ProjComplex>, v: &[u32]) -> ChainMap {
        assert_eq!(self.k, 0);
        ChainMap::from_components(x, y, self.blocks(alg, x, y, v)).expect("shapes match")
    }

    pub fn encode(&self, f: &ChainMap) -> Vec<u32> {
        self.encode_blocks(f.components())
    }
}

fn zero_block(rows: &[usize], cols: &[usize]) -> Block {
    rows.iter()
        .map(|&u| cols.iter().map(|&v| AlgElem::zero(u, v)).collect())
        .collect()
}

/// `a` then `b`, as blocks.
fn then(alg: &Algebra, a: &Block, b: &Block, rows: &[usize], cols: &[usize]) -> Block {
    let mut out = zero_block(rows, cols);
    for (s, row) in a.iter().enumerate() {
        for (m, x) in row.iter().enumerate() {
            for (t, y) in b[m].iter().enumerate() {
                let z = alg.mul(x, y).expect("composable");
                out[s][t] = alg.add(&out[s][t], &z);
            }
        }
    }
    out
}

fn add_into(alg: &Algebra, acc: &mut BTreeMap<(i64, usize, usize), AlgElem>, n: i64, b: &Block, sign: u32) {
    for (s, row) in b.iter().enumerate() {
        for (t, e) in row.iter().enumerate() {
            let cur = acc.entry((n, s, t)).or_insert_with(|| AlgElem::zero(e.dom, e.cod));
            *cur = alg.add(cur, &alg.scale(sign, e));
        }
    }
}

fn flatten(alg: &Algebra, acc: &BTreeMap<(i64, usize, usize), AlgElem>) -> Vec<u32> {
    let dim = alg.pres.dim();
    let mut v = Vec::new();
    for e in acc.values() {
        let mut dense = vec![0; dim];
        for &(p, c) in &e.terms {
            dense[p] = c;
        }
        v.extend(dense);
    }
    v
}

/// `f^{n+1} d_X^n - d_Y^n f^n` for every `n`, as one vector.
fn chain_defect(alg: &Algebra, x: &ProjComplex, y: &ProjComplex, f: &BTreeMap<i64, Block>) -> Vec<u32> {
    let minus = alg.field.neg(1);
    let mut acc = BTreeMap::new();
    let (Some((a, b)), Some((c, d))) = (x.support(), y.support()) else {
        return Vec::new();
    };
    for n in a.min(c) - 1..=b.max(d) {
        let (xr, yc) = (x.term(n), y.term(n + 1));
        if xr.is_empty() || yc.is_empty() {
            continue;
        }
        add_into(alg, &mut acc, n, &zero_block(xr, yc), 1);
        if let (Some(dx), Some(fn1)) = (x.diff(n), f.get(&(n + 1))) {
            add_into(alg, &mut acc, n, &then(alg, dx, fn1, xr, yc), 1);
        }
        if let (Some(fnn), Some(dy)) = (f.get(&n), y.diff(n)) {
            add_into(alg, &mut acc, n, &then(alg, fnn, dy, xr, yc), minus);
        }
    }
    flatten(alg, &acc)
}

/// `d_Y h + h d_X` for a degree -1 map `h`.
fn boundary(alg: &Algebra, x: &ProjComplex, y: &ProjComplex, h: &BTreeMap<i64, Block>) -> BTreeMap<i64, Block> {
    let mut out = BTreeMap::new();
    let Some((a, b)) = x.support() else { return out };
    for n in a..=b {
        let (xr, yc) = (x.term(n), y.term(n));
        if xr.is_empty() || yc.is_empty() {
            continue;
        }
        let mut acc = zero_block(xr, yc);
        if let (Some(hn), Some(dy)) = (h.get(&n), y.diff(n - 1)) {
            acc = sum(alg, &acc, &then(alg, hn, dy, xr, yc));
        }
        if let (Some(dx), Some(h1)) = (x.diff(n), h.get(&(n + 1))) {
            acc = sum(alg, &acc, &then(alg, dx, h1, xr, yc));
        }
        out.insert(n, acc);
    }
    out
}

fn sum(alg: &Algebra, a: &Block, b: &Block) -> Block {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| alg.add(x, y)).collect())
        .collect()
}

/// Row echelon form in place; returns pivot columns.
pub fn echelon(rows: &mut Vec<Vec<u32>>, p: u32) -> Vec<usize> {
    let p64 = p as u64;
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = pow(rows[r][c] as u64, p64 - 2, p64);
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * inv % p64) as u32;
        }
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let m = row[c] as u64;
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = ((*x as u64 + (p64 - m) * y as u64) % p64) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

pub fn rank(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    echelon(&mut rows, p).len()
}

/// Kernel of the linear map whose values on unit vectors are `images`.
pub fn kernel(images: &[Vec<u32>], nvars: usize, p: u32) -> Vec<Vec<u32>> {
    let len = images.first().map_or(0, |v| v.len());
    let mut rows: Vec<Vec<u32>> = (0..len).map(|i| images.iter().map(|v| v[i]).collect()).collect();
    if rows.is_empty() {
        rows.push(vec![0; nvars]);
    }
    let pivots = echelon(&mut rows, p);
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; nvars];
            v[f] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Chain maps and null-homotopic maps `X -> Y` in the oracle's coordinates.
pub struct BruteHom {
    pub slots: Slots,
    pub cycles: Vec<Vec<u32>>,
    /// Echelonized span of the null-homotopic maps.
    pub null: Vec<Vec<u32>>,
    null_pivots: Vec<usize>,
    pub p: u32,
}

impl BruteHom {
    pub fn new(alg: &Algebra, x: &ProjComplex, y: &ProjComplex) -> Self {
        let p = alg.field.prime();
        let slots = Slots::new(alg, x, y, 0);
        let images: Vec<Vec<u32>> = (0..slots.len())
            .map(|i| chain_defect(alg, x, y, &slots.blocks(alg, x, y, &unit(slots.len(), i))))
            .collect();
        let cycles = kernel(&images, slots.len(), p);
        let hs = Slots::new(alg, x, y, -1);
        let mut null: Vec<Vec<u32>> = (0..hs.len())
            .map(|i| {
                let h = hs.blocks(alg, x, y, &unit(hs.len(), i));
                slots.encode_blocks(&boundary(alg, x, y, &h))
            })
            .collect();
        let null_pivots = if null.is_empty() { Vec::new() } else { echelon(&mut null, p) };
        BruteHom { slots, cycles, null, null_pivots, p }
    }

    pub fn dim(&self) -> usize {
        self.cycles.len() - self.null.len()
    }

    /// Residue of `v` modulo the null-homotopic span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut w = v.to_vec();
        for (row, &c) in self.null.iter().zip(&self.null_pivots) {
            if w[c] != 0 {
                let m = w[c] as u64;
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = ((*x as u64 + (p - m) * y as u64) % p) as u32;
                }
            }
        }
        w
    }
}

/// Dimension of the window center by a chain-level naturality solve.
pub fn brute_center_dim(alg: &Algebra, objs: &[Arc<ProjComplex>]) -> usize {
    let p = alg.field.prime();
    // objects in reverse order
    let objs: Vec<Arc<ProjComplex>> = objs.iter().rev().cloned().collect();
    let n = objs.len();
    let homs: Vec<Vec<BruteHom>> = objs
        .iter()
        .map(|x| objs.iter().map(|y| BruteHom::new(alg, x, y)).collect())
        .collect();
    let mut offsets = Vec::with_capacity(n);
    let mut nvars = 0;
    for (i, row) in homs.iter().enumerate() {
        offsets.push(nvars);
        nvars += row[i].cycles.len();
    }
    let lambdas: Vec<Vec<ChainMap>> = (0..n)
        .map(|i| {
            let h = &homs[i][i];
            h.cycles.iter().map(|c| h.slots.decode(alg, &objs[i], &objs[i], c)).collect()
        })
        .collect();
    let minus = alg.field.neg(1);
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let h = &homs[i][j];
            if h.dim() == 0 {
                continue;
            }
            for c in &h.cycles {
                let f = h.slots.decode(alg, &objs[i], &objs[j], c);
                let mut cols: Vec<(usize, Vec<u32>)> = Vec::new();
                for (a, l) in lambdas[j].iter().enumerate() {
                    cols.push((offsets[j] + a, h.reduce(&h.slots.encode(&f.then(alg, l).unwrap()))));
                }
                for (a, l) in lambdas[i].iter().enumerate() {
                    let v = h.reduce(&h.slots.encode(&l.then(alg, &f).unwrap()));
                    cols.push((offsets[i] + a, v.iter().map(|&x| alg.field.mul(x, minus)).collect()));
                }
                for k in 0..h.slots.len() {
                    let mut row = vec![0; nvars];
                    for (col, v) in &cols {
                        row[*col] = alg.field.add(row[*col], v[k]);
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
            // keep the system small
            if rows.len() > 4 * nvars {
                echelon(&mut rows, p);
            }
        }
    }
    let natural = nvars - rank(rows, p);
    let null: usize = (0..n).map(|i| homs[i][i].null.len()).sum();
    natural - null
}
