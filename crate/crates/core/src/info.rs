//! Finite-alphabet distributions and information measures.
//!
//! Every quantity is in bits. Joints are stored densely in row-major order
//! (the first variable varies slowest) and carry a name per variable, so
//! information terms read the way they are written on paper:
//!
//! ```
//! use confbc::info::JointPmf;
//!
//! // X uniform, Y = X through a binary symmetric channel with crossover 0.2.
//! let joint = JointPmf::new(
//!     &["X", "Y"],
//!     &[2, 2],
//!     vec![0.4, 0.1, 0.1, 0.4],
//! )
//! .unwrap();
//! let i = joint.mutual_information(&["X"], &["Y"], &[]).unwrap();
//! assert!((i - 0.278_071_905_112_638_1).abs() < 1e-12);
//! ```

use crate::channels::DmBroadcastChannel;
use crate::error::{Error, Result};

/// Total-mass and row-sum tolerance.
pub const MASS_TOL: f64 = 1e-12;

/// Largest dense joint we are willing to allocate.
pub const MAX_CELLS: usize = 10_000_000;

/// Canonical variable names used by the bound evaluators.
pub mod vars {
    pub const U: &str = "U";
    pub const V: &str = "V";
    pub const W: &str = "W";
    pub const X: &str = "X";
    pub const Y1: &str = "Y1";
    pub const Y2: &str = "Y2";
    pub const YHAT1: &str = "Yhat1";
    pub const YHAT2: &str = "Yhat2";
}

fn check_masses(probs: &[f64]) -> Result<()> {
    if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistribution(format!("total mass {total} differs from 1")));
    }
    Ok(())
}

fn cell_count(cards: &[usize]) -> Result<usize> {
    let mut cells = 1usize;
    for &c in cards {
        if c == 0 {
            return Err(Error::ShapeMismatch("alphabet sizes must be positive".into()));
        }
        cells = cells.checked_mul(c).unwrap_or(usize::MAX);
        if cells > MAX_CELLS {
            return Err(Error::AlphabetTooLarge { cells, cap: MAX_CELLS });
        }
    }
    Ok(cells)
}

/// Shannon entropy of a mass vector in bits, with `0 log 0 = 0`.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Binary entropy function.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}

/// A distribution over a single finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        check_masses(&probs)?;
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }
}

/// A conditional mass function `P(out | given)`.
///
/// Rows are indexed row-major over the conditioning alphabets; each row is a
/// distribution over `out_card` symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditional {
    given_cards: Vec<usize>,
    out_card: usize,
    probs: Vec<f64>,
}

impl Conditional {
    pub fn new(given_cards: &[usize], out_card: usize, probs: Vec<f64>) -> Result<Self> {
        let rows = cell_count(given_cards)?;
        if out_card == 0 {
            return Err(Error::ShapeMismatch("output alphabet must be nonempty".into()));
        }
        if probs.len() != rows * out_card {
            return Err(Error::ShapeMismatch(format!(
                "conditional needs {} entries, got {}",
                rows * out_card,
                probs.len()
            )));
        }
        for (r, row) in probs.chunks(out_card).enumerate() {
            check_masses(row).map_err(|e| {
                Error::InvalidDistribution(format!("row {r} is not stochastic ({e})"))
            })?;
        }
        Ok(Self { given_cards: given_cards.to_vec(), out_card, probs })
    }

    /// Builds a conditional from a closure `f(given_row_index, out) -> mass`.
    pub fn from_fn(
        given_cards: &[usize],
        out_card: usize,
        f: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let rows = cell_count(given_cards)?;
        let probs = (0..rows)
            .flat_map(|r| (0..out_card).map(move |o| (r, o)))
            .map(|(r, o)| f(r, o))
            .collect();
        Self::new(given_cards, out_card, probs)
    }

    /// Output equals the (single) conditioning symbol.
    pub fn identity(card: usize) -> Self {
        let mut probs = vec![0.0; card * card];
        for i in 0..card {
            probs[i * card + i] = 1.0;
        }
        Self { given_cards: vec![card], out_card: card, probs }
    }

    /// A constant output: the "absent" variable.
    pub fn trivial(given_cards: &[usize]) -> Self {
        let rows = given_cards.iter().product();
        Self { given_cards: given_cards.to_vec(), out_card: 1, probs: vec![1.0; rows] }
    }

    pub fn given_cards(&self) -> &[usize] {
        &self.given_cards
    }

    pub fn out_card(&self) -> usize {
        self.out_card
    }

    pub fn rows(&self) -> usize {
        self.probs.len() / self.out_card
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.probs[r * self.out_card..(r + 1) * self.out_card]
    }

    pub fn prob(&self, r: usize, out: usize) -> f64 {
        self.probs[r * self.out_card + out]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// A dense joint mass function over named finite variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    names: Vec<String>,
    cards: Vec<usize>,
    strides: Vec<usize>,
    probs: Vec<f64>,
}

fn strides_for(cards: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * cards[i + 1];
    }
    strides
}

impl JointPmf {
    pub fn new(names: &[&str], cards: &[usize], probs: Vec<f64>) -> Result<Self> {
        if names.len() != cards.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} names for {} alphabets",
                names.len(),
                cards.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::ShapeMismatch(format!("duplicate variable `{n}`")));
            }
        }
        let cells = cell_count(cards)?;
        if probs.len() != cells {
            return Err(Error::ShapeMismatch(format!(
                "joint needs {cells} entries, got {}",
                probs.len()
            )));
        }
        check_masses(&probs)?;
        Ok(Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            cards: cards.to_vec(),
            strides: strides_for(cards),
            probs,
        })
    }

    pub fn from_pmf(name: &str, pmf: &Pmf) -> Self {
        Self {
            names: vec![name.to_string()],
            cards: vec![pmf.len()],
            strides: vec![1],
            probs: pmf.probs().to_vec(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn card(&self, name: &str) -> Result<usize> {
        Ok(self.cards[self.index_of(name)?])
    }

    fn indices(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let i = self.index_of(n)?;
            if out.contains(&i) {
                return Err(Error::OverlappingVariables(n.to_string()));
            }
            out.push(i);
        }
        Ok(out)
    }

    /// Marginal masses over `idx`, row-major in the order given.
    fn marginal_masses(&self, idx: &[usize]) -> Vec<f64> {
        if idx.is_empty() {
            return vec![1.0];
        }
        let sub_cards: Vec<usize> = idx.iter().map(|&i| self.cards[i]).collect();
        let sub_strides = strides_for(&sub_cards);
        let mut out = vec![0.0; sub_cards.iter().product()];
        for (cell, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut sub = 0;
            for (k, &i) in idx.iter().enumerate() {
                sub += (cell / self.strides[i]) % self.cards[i] * sub_strides[k];
            }
            out[sub] += p;
        }
        out
    }

    fn entropy_idx(&self, idx: &[usize]) -> f64 {
        entropy_bits(&self.marginal_masses(idx))
    }

    /// The marginal joint over `names`, in that order.
    pub fn marginal(&self, names: &[&str]) -> Result<JointPmf> {
        let idx = self.indices(names)?;
        let cards: Vec<usize> = idx.iter().map(|&i| self.cards[i]).collect();
        Ok(Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            strides: strides_for(&cards),
            cards,
            probs: self.marginal_masses(&idx),
        })
    }

    /// `H(names)` in bits.
    pub fn entropy(&self, names: &[&str]) -> Result<f64> {
        if names.is_empty() {
            return Err(Error::InvalidParameter("entropy of an empty variable set".into()));
        }
        Ok(self.entropy_idx(&self.indices(names)?))
    }

    /// `I(a; b | given)` in bits.
    ///
    /// The three sets must be pairwise disjoint. Values within `1e-12` below
    /// zero are rounding noise and are clipped to zero.
    pub fn mutual_information(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
        let ia = self.indices(a)?;
        let ib = self.indices(b)?;
        let ic = self.indices(given)?;
        for (x, y, set) in [(&ia, &ib, b), (&ia, &ic, given), (&ib, &ic, given)] {
            if let Some(&i) = x.iter().find(|i| y.contains(i)) {
                let _ = set;
                return Err(Error::OverlappingVariables(self.names[i].clone()));
            }
        }
        if ia.is_empty() || ib.is_empty() {
            return Ok(0.0);
        }
        let ac: Vec<usize> = ia.iter().chain(&ic).copied().collect();
        let bc: Vec<usize> = ib.iter().chain(&ic).copied().collect();
        let abc: Vec<usize> = ia.iter().chain(&ib).chain(&ic).copied().collect();
        let value = self.entropy_idx(&ac) + self.entropy_idx(&bc)
            - self.entropy_idx(&abc)
            - self.entropy_idx(&ic);
        Ok(if value < 0.0 && value > -MASS_TOL { 0.0 } else { value })
    }

    /// Appends new variables drawn from `cond` given the variables `given`.
    ///
    /// `cond` rows are indexed by `given` in the order listed; its output
    /// alphabet is split row-major across `new_vars`.
    pub fn extend(
        &self,
        given: &[&str],
        cond: &Conditional,
        new_vars: &[(&str, usize)],
    ) -> Result<JointPmf> {
        let gidx = self.indices(given)?;
        let gcards: Vec<usize> = gidx.iter().map(|&i| self.cards[i]).collect();
        if gcards != cond.given_cards {
            return Err(Error::ShapeMismatch(format!(
                "conditional expects given alphabets {:?}, joint has {:?}",
                cond.given_cards, gcards
            )));
        }
        let out_card: usize = new_vars.iter().map(|(_, c)| *c).product();
        if out_card != cond.out_card {
            return Err(Error::ShapeMismatch(format!(
                "new variables span {out_card} symbols, conditional has {}",
                cond.out_card
            )));
        }
        let mut names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        let mut cards = self.cards.clone();
        for &(n, c) in new_vars {
            if names.contains(&n) {
                return Err(Error::ShapeMismatch(format!("variable `{n}` already present")));
            }
            names.push(n);
            cards.push(c);
        }
        cell_count(&cards)?;
        let gstrides = strides_for(&gcards);
        let mut probs = vec![0.0; self.probs.len() * out_card];
        for (cell, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut row = 0;
            for (k, &i) in gidx.iter().enumerate() {
                row += (cell / self.strides[i]) % self.cards[i] * gstrides[k];
            }
            let dst = &mut probs[cell * out_card..(cell + 1) * out_card];
            for (d, &q) in dst.iter_mut().zip(cond.row(row)) {
                *d = p * q;
            }
        }
        Ok(Self {
            names: names.into_iter().map(str::to_string).collect(),
            strides: strides_for(&cards),
            cards,
            probs,
        })
    }

    /// Renames variables positionally.
    pub fn with_names(mut self, names: &[&str]) -> Result<Self> {
        if names.len() != self.names.len() {
            return Err(Error::ShapeMismatch("rename needs one name per variable".into()));
        }
        self.names = names.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }
}

/// Builds the joint of `(U,V,W,X,Y1,Y2,Yhat1,Yhat2)` from an auxiliary
/// distribution over `(U,V,W,X)` (positionally), the channel, the first
/// quantizer `P(yhat1 | u, w, y1)` and the second quantizer, given either
/// `y2` alone or `(w, y2)`.
pub fn compose_joint(
    aux: &JointPmf,
    channel: &DmBroadcastChannel,
    q1: &Conditional,
    q2: &Conditional,
) -> Result<JointPmf> {
    use vars::*;
    if aux.cards().len() != 4 {
        return Err(Error::ShapeMismatch("auxiliary joint must be over (U,V,W,X)".into()));
    }
    if aux.cards()[3] != channel.x_card() {
        return Err(Error::ShapeMismatch(format!(
            "auxiliary input alphabet {} differs from channel input alphabet {}",
            aux.cards()[3],
            channel.x_card()
        )));
    }
    let aux = aux.clone().with_names(&[U, V, W, X])?;
    let with_outputs = extend_with_channel(&aux, channel)?;
    let yh1 = q1.out_card();
    let with_q1 = with_outputs.extend(&[U, W, Y1], q1, &[(YHAT1, yh1)])?;
    let q2_given: &[&str] = match q2.given_cards().len() {
        1 => &[Y2],
        2 => &[W, Y2],
        _ => {
            return Err(Error::ShapeMismatch(
                "second quantizer must condition on y2 or (w, y2)".into(),
            ))
        }
    };
    with_q1.extend(q2_given, q2, &[(YHAT2, q2.out_card())])
}

/// Appends `(Y1, Y2)` drawn through the channel from the variable named `X`.
pub fn extend_with_channel(joint: &JointPmf, channel: &DmBroadcastChannel) -> Result<JointPmf> {
    joint.extend(
        &[vars::X],
        channel.transition(),
        &[(vars::Y1, channel.y1_card()), (vars::Y2, channel.y2_card())],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bsc_joint(px0: f64, eps: f64) -> JointPmf {
        let px = [px0, 1.0 - px0];
        let mut probs = Vec::new();
        for (x, &p) in px.iter().enumerate() {
            for y in 0..2 {
                probs.push(p * if x == y { 1.0 - eps } else { eps });
            }
        }
        JointPmf::new(&["X", "Y"], &[2, 2], probs).unwrap()
    }

    #[test]
    fn entropy_examples() {
        let uniform = JointPmf::from_pmf("X", &Pmf::uniform(2));
        assert_abs_diff_eq!(uniform.entropy(&["X"]).unwrap(), 1.0, epsilon = 1e-15);
        let point = JointPmf::from_pmf("X", &Pmf::point_mass(3, 1));
        assert_eq!(point.entropy(&["X"]).unwrap(), 0.0);
        let skewed = JointPmf::from_pmf("X", &Pmf::new(vec![0.2, 0.8]).unwrap());
        // -0.2 log2 0.2 - 0.8 log2 0.8
        assert_abs_diff_eq!(skewed.entropy(&["X"]).unwrap(), 0.721_928_094_887_362_3, epsilon = 1e-12);
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let j = bsc_joint(0.5, 0.1);
        assert!(matches!(j.entropy(&["Z"]), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn mutual_information_examples() {
        let indep = JointPmf::new(&["A", "B"], &[2, 2], vec![0.25; 4]).unwrap();
        assert_eq!(indep.mutual_information(&["A"], &["B"], &[]).unwrap(), 0.0);
        let noiseless = bsc_joint(0.5, 0.0);
        assert_abs_diff_eq!(
            noiseless.mutual_information(&["X"], &["Y"], &[]).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        // Exhaustive evaluation of the joint: sum p(x,y) log p(x,y)/(p(x)p(y)).
        let bsc = bsc_joint(0.5, 0.2);
        let mut oracle = 0.0;
        for (cell, &p) in bsc.probs().iter().enumerate() {
            let _ = cell;
            oracle += p * (p / 0.25).log2();
        }
        assert_abs_diff_eq!(oracle, 0.278_071_905_112_638, epsilon = 1e-12);
        assert_abs_diff_eq!(
            bsc.mutual_information(&["X"], &["Y"], &[]).unwrap(),
            oracle,
            epsilon = 1e-12
        );
    }

    #[test]
    fn overlapping_sets_rejected() {
        let j = bsc_joint(0.5, 0.1);
        assert!(matches!(
            j.mutual_information(&["X"], &["X"], &[]),
            Err(Error::OverlappingVariables(_))
        ));
        assert!(matches!(
            j.mutual_information(&["X"], &["Y"], &["Y"]),
            Err(Error::OverlappingVariables(_))
        ));
    }

    #[test]
    fn mass_validation() {
        assert!(Pmf::new(vec![0.5, 0.4]).is_err());
        assert!(Pmf::new(vec![1.5, -0.5]).is_err());
        assert!(JointPmf::new(&["A"], &[3], vec![0.5, 0.5]).is_err());
        assert!(Conditional::new(&[2], 2, vec![0.5, 0.5, 0.2, 0.7]).is_err());
    }

    #[test]
    fn alphabet_cap() {
        let err = Conditional::new(&[10_000, 10_000], 1, vec![]).unwrap_err();
        assert!(matches!(err, Error::AlphabetTooLarge { .. }));
    }

    #[test]
    fn extend_preserves_marginal() {
        let base = JointPmf::new(&["A"], &[3], vec![0.2, 0.3, 0.5]).unwrap();
        let cond = Conditional::new(&[3], 2, vec![0.1, 0.9, 0.5, 0.5, 1.0, 0.0]).unwrap();
        let ext = base.extend(&["A"], &cond, &[("B", 2)]).unwrap();
        let back = ext.marginal(&["A"]).unwrap();
        for (x, y) in back.probs().iter().zip(base.probs()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(ext.probs()[1], 0.18, epsilon = 1e-15);
    }
}
