//! Quasi-cyclic LDPC codes with a block-bidiagonal parity part.

use crate::error::{Error, Result};

/// Normalization of the min-sum check update.
pub const MIN_SUM_SCALE: f64 = 0.75;
pub const DEFAULT_MAX_ITERS: usize = 25;

const DEFAULT_PROTOGRAPH: &str = include_str!("../../data/qc_r0926_z36.txt");

#[derive(Debug, Clone)]
pub struct LdpcCode {
    z: usize,
    base: Vec<Vec<i32>>,
    n: usize,
    k: usize,
    /// Variable index of every edge, grouped by check.
    edge_var: Vec<u32>,
    check_start: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    /// Hard decisions on all `n` code bits.
    pub codeword: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

impl DecodeOutcome {
    /// Systematic part of the decision.
    pub fn info<'a>(&'a self, code: &LdpcCode) -> &'a [u8] {
        &self.codeword[..code.k()]
    }
}

impl LdpcCode {
    /// Lifts a base matrix of circulant shifts (`-1` = zero block).
    ///
    /// The last `rows` block columns must form a block-bidiagonal staircase:
    /// column `kb + j` touches block rows `j` and `j + 1`, the final one only
    /// the last row. That structure gives a linear-time encoder.
    pub fn from_base(z: usize, base: Vec<Vec<i32>>) -> Result<Self> {
        let mb = base.len();
        if z == 0 || mb == 0 {
            return Err(Error::InvalidParameter("empty protograph".into()));
        }
        let nb = base[0].len();
        if nb <= mb || base.iter().any(|r| r.len() != nb) {
            return Err(Error::InvalidParameter("ragged or square protograph".into()));
        }
        if base.iter().flatten().any(|&s| s < -1 || s >= z as i32) {
            return Err(Error::InvalidParameter(format!("shift out of range for Z = {z}")));
        }
        let kb = nb - mb;
        for (r, row) in base.iter().enumerate() {
            for j in 0..mb {
                let expected = r == j || r == j + 1;
                if (row[kb + j] >= 0) != expected {
                    return Err(Error::InvalidParameter(format!(
                        "parity block ({r}, {}) breaks the bidiagonal structure",
                        kb + j
                    )));
                }
            }
        }
        let mut edge_var = Vec::new();
        let mut check_start = Vec::with_capacity(mb * z + 1);
        for row in &base {
            for i in 0..z {
                check_start.push(edge_var.len());
                for (c, &s) in row.iter().enumerate() {
                    if s >= 0 {
                        edge_var.push((c * z + (i + s as usize) % z) as u32);
                    }
                }
            }
        }
        check_start.push(edge_var.len());
        Ok(Self {
            z,
            n: nb * z,
            k: kb * z,
            base,
            edge_var,
            check_start,
        })
    }

    /// Shipped rate-25/27 code, `n = 1944`, `Z = 36`.
    pub fn default_code() -> Self {
        parse_protograph(DEFAULT_PROTOGRAPH).expect("bundled protograph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn base(&self) -> &[Vec<i32>] {
        &self.base
    }

    pub fn checks(&self) -> usize {
        self.n - self.k
    }

    /// Variable indices of check `r`.
    pub fn check(&self, r: usize) -> &[u32] {
        &self.edge_var[self.check_start[r]..self.check_start[r + 1]]
    }

    pub fn edges(&self) -> usize {
        self.edge_var.len()
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n
            && (0..self.checks()).all(|r| self.check(r).iter().fold(0u8, |acc, &v| acc ^ bits[v as usize]) == 0)
    }

    /// Systematic encoding `[info | parity]`.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: info.len(),
            });
        }
        let z = self.z;
        let mb = self.base.len();
        let kb = self.k / z;
        let mut syn = vec![vec![0u8; z]; mb];
        for (r, row) in self.base.iter().enumerate() {
            for (c, &s) in row[..kb].iter().enumerate() {
                if s < 0 {
                    continue;
                }
                let blk = &info[c * z..(c + 1) * z];
                for (i, out) in syn[r].iter_mut().enumerate() {
                    *out ^= blk[(i + s as usize) % z];
                }
            }
        }
        let mut cw = Vec::with_capacity(self.n);
        cw.extend_from_slice(info);
        let mut prev: Vec<u8> = Vec::new();
        for r in 0..mb {
            let mut t = syn[r].clone();
            if r > 0 {
                let s = self.base[r][kb + r - 1] as usize;
                for (i, ti) in t.iter_mut().enumerate() {
                    *ti ^= prev[(i + s) % z];
                }
            }
            // Solve P_s · p = t, i.e. p[(i + s) mod z] = t[i].
            let s = self.base[r][kb + r] as usize;
            let mut p = vec![0u8; z];
            for (i, &ti) in t.iter().enumerate() {
                p[(i + s) % z] = ti;
            }
            cw.extend_from_slice(&p);
            prev = p;
        }
        debug_assert!(self.is_codeword(&cw));
        Ok(cw)
    }

    /// Normalized min-sum decoding with a flooding schedule.
    ///
    /// LLRs are positive for bit 0. A zero posterior is an undecided bit and
    /// blocks convergence.
    pub fn decode(&self, llrs: &[f64], max_iters: usize) -> Result<DecodeOutcome> {
        if llrs.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: llrs.len(),
            });
        }
        let mut c2v = vec![0.0f64; self.edge_var.len()];
        let mut post = llrs.to_vec();
        let mut hard = vec![0u8; self.n];
        if self.decide(&post, &mut hard) {
            return Ok(DecodeOutcome {
                codeword: hard,
                converged: true,
                iterations: 0,
            });
        }
        let mut v2c = Vec::new();
        for iter in 1..=max_iters {
            for r in 0..self.checks() {
                let range = self.check_start[r]..self.check_start[r + 1];
                v2c.clear();
                let mut sign = false;
                let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                for (j, e) in range.clone().enumerate() {
                    let m = post[self.edge_var[e] as usize] - c2v[e];
                    v2c.push(m);
                    sign ^= m < 0.0;
                    let a = m.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        arg = j;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for (j, e) in range.enumerate() {
                    let mag = if j == arg { min2 } else { min1 };
                    let s = sign ^ (v2c[j] < 0.0);
                    c2v[e] = MIN_SUM_SCALE * if s { -mag } else { mag };
                }
            }
            // Flooding: every check above read the previous posteriors.
            post.copy_from_slice(llrs);
            for (e, &v) in self.edge_var.iter().enumerate() {
                post[v as usize] += c2v[e];
            }
            if self.decide(&post, &mut hard) {
                return Ok(DecodeOutcome {
                    codeword: hard,
                    converged: true,
                    iterations: iter,
                });
            }
        }
        Ok(DecodeOutcome {
            codeword: hard,
            converged: false,
            iterations: max_iters,
        })
    }

    fn decide(&self, post: &[f64], hard: &mut [u8]) -> bool {
        let mut undecided = false;
        for (h, &p) in hard.iter_mut().zip(post) {
            *h = (p < 0.0) as u8;
            undecided |= p == 0.0;
        }
        !undecided && self.is_codeword(hard)
    }
}

/// Reads a protograph: first line `Z rows cols`, then `rows` lines of
/// `cols` integer shifts with `-1` for zero blocks. `#` starts a comment.
pub fn parse_protograph(text: &str) -> Result<LdpcCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Protograph {
        line: 1,
        msg: "empty file".into(),
    })?;
    let nums = |line: usize, s: &str| -> Result<Vec<i64>> {
        s.split_whitespace()
            .map(|t| {
                t.parse::<i64>().map_err(|_| Error::Protograph {
                    line,
                    msg: format!("not an integer: {t:?}"),
                })
            })
            .collect()
    };
    let h = nums(hline, header)?;
    if h.len() != 3 || h.iter().any(|&x| x <= 0) {
        return Err(Error::Protograph {
            line: hline,
            msg: "header must be `Z rows cols` with positive values".into(),
        });
    }
    let (z, mb, nb) = (h[0] as usize, h[1] as usize, h[2] as usize);
    let mut base = Vec::with_capacity(mb);
    for (line, l) in lines {
        let row = nums(line, l)?;
        if row.len() != nb {
            return Err(Error::Protograph {
                line,
                msg: format!("expected {nb} entries, found {}", row.len()),
            });
        }
        if let Some(bad) = row.iter().find(|&&s| s < -1 || s >= z as i64) {
            return Err(Error::Protograph {
                line,
                msg: format!("shift {bad} outside -1..{z}"),
            });
        }
        base.push(row.into_iter().map(|s| s as i32).collect());
    }
    if base.len() != mb {
        return Err(Error::Protograph {
            line: hline,
            msg: format!("header declares {mb} rows, found {}", base.len()),
        });
    }
    LdpcCode::from_base(z, base)
}
