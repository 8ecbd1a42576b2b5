//! Upward covering: isolated subsets and the four covering constructions.
//!
//! For a code `D`, every code covering it is isomorphic to one built from an
//! isolated subset `I` of the intersection-completion `D̂` by adding a fresh
//! neuron `α = n + 1` to the codewords of `D ∩ I`, in one of four ways.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::canon::canonical_key;
use crate::code::Code;
use crate::codeword::Codeword;
use crate::descent::covers;
use crate::error::{Error, Result};
use crate::morphism::{extend_to_completion, recover_determining_trunks, CodeMap, Morphism};

/// A nonempty, intersection-complete subset of an intersection-complete host
/// in which no outside codeword contains a non-minimal member.
#[derive(Clone, PartialEq, Eq)]
pub struct IsolatedSubset {
    host: Code,
    members: Vec<Codeword>,
    mu: Codeword,
}

impl IsolatedSubset {
    pub fn host(&self) -> &Code {
        &self.host
    }

    /// Members in codeword order.
    pub fn members(&self) -> &[Codeword] {
        &self.members
    }

    /// The minimal member, which is the intersection of all members.
    pub fn mu(&self) -> Codeword {
        self.mu
    }

    pub fn contains(&self, c: Codeword) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Debug for IsolatedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{:?} (μ = {})", self.members, self.mu)
    }
}

impl Serialize for IsolatedSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            members: &'a [Codeword],
            mu: Codeword,
        }
        Repr { members: &self.members, mu: self.mu }.serialize(serializer)
    }
}

fn require_complete(host: &Code) -> Result<()> {
    if host.is_intersection_complete() {
        Ok(())
    } else {
        Err(Error::HostNotIntersectionComplete)
    }
}

/// Checks the three conditions on `members` and returns the isolated subset
/// when they hold.
pub fn is_isolated(host: &Code, members: &[Codeword]) -> Result<Option<IsolatedSubset>> {
    require_complete(host)?;
    if let Some(&bad) = members.iter().find(|&&m| !host.contains(m)) {
        return Err(Error::NotASubset(bad));
    }
    let mut members = members.to_vec();
    members.sort_unstable();
    members.dedup();
    Ok(check_isolated(host, members))
}

fn check_isolated(host: &Code, members: Vec<Codeword>) -> Option<IsolatedSubset> {
    if members.is_empty() {
        return None;
    }
    let set: HashSet<Codeword> = members.iter().copied().collect();
    let closed =
        members.iter().enumerate().all(|(k, &a)| members[k + 1..].iter().all(|&b| set.contains(&a.intersection(b))));
    if !closed {
        return None;
    }
    let mu = members.iter().fold(members[0], |acc, &m| acc.intersection(m));
    let isolated = members
        .iter()
        .filter(|&&tau| tau != mu)
        .all(|&tau| host.words().iter().all(|&s| !tau.is_subset(s) || set.contains(&s)));
    isolated.then(|| IsolatedSubset { host: host.clone(), members, mu })
}

/// Every isolated subset of `host`, ordered by size and then by members.
///
/// With minimal element `μ`, the non-minimal members form an up-set of the
/// codewords strictly above `μ`, so only up-sets are generated; each is then
/// checked for closure under intersection.
pub fn isolated_subsets(host: &Code) -> Result<Vec<IsolatedSubset>> {
    require_complete(host)?;
    let mut out = Vec::new();
    for &mu in host.words() {
        let mut above: Vec<Codeword> = host.words().iter().copied().filter(|&w| w != mu && mu.is_subset(w)).collect();
        above.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut chosen = Vec::new();
        upsets(host, mu, &above, 0, &mut chosen, &mut out);
    }
    out.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

fn upsets(
    host: &Code,
    mu: Codeword,
    above: &[Codeword],
    next: usize,
    chosen: &mut Vec<Codeword>,
    out: &mut Vec<IsolatedSubset>,
) {
    if next == above.len() {
        let mut members = chosen.clone();
        members.push(mu);
        members.sort_unstable();
        if let Some(iso) = check_isolated(host, members) {
            debug_assert_eq!(iso.mu, mu);
            out.push(iso);
        }
        return;
    }
    upsets(host, mu, above, next + 1, chosen, out);
    let tau = above[next];
    // supersets of τ come earlier in `above`; all of them must be chosen
    let closed_above = above[..next].iter().filter(|&&s| tau.is_subset(s)).all(|s| chosen.contains(s));
    if closed_above {
        chosen.push(tau);
        upsets(host, mu, above, next + 1, chosen, out);
        chosen.pop();
    }
}

/// The four constructions, numbered as in the usual table of covering codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoverType {
    /// `(D∩I)_α ∪ D∖I ∪ {μ}`; needs `μ ∈ D`.
    KeepBoth = 1,
    /// `(D∩I)_α ∪ D∖I`; needs `μ ∈ D` and a codeword above `μ` outside `I`.
    LiftMu = 2,
    /// `(D∩I∖{μ})_α ∪ D∖I ∪ {μ}`; needs `μ ∈ D` equal to the meet of `D∩I∖{μ}`.
    KeepMu = 3,
    /// `(D∩I)_α ∪ D∖I`; needs `μ ∉ D`, the meet condition and a codeword
    /// above `μ` outside `I`.
    Neither = 4,
}

impl CoverType {
    pub const ALL: [CoverType; 4] = [CoverType::KeepBoth, CoverType::LiftMu, CoverType::KeepMu, CoverType::Neither];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(t: u8) -> Result<CoverType> {
        match t {
            1 => Ok(CoverType::KeepBoth),
            2 => Ok(CoverType::LiftMu),
            3 => Ok(CoverType::KeepMu),
            4 => Ok(CoverType::Neither),
            _ => Err(Error::UnknownCoverType(t)),
        }
    }
}

impl Serialize for CoverType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.number())
    }
}

fn check_host(d: &Code, iso: &IsolatedSubset) -> Result<()> {
    if iso.host == d.intersection_completion() {
        Ok(())
    } else {
        Err(Error::HostMismatch)
    }
}

/// Evaluates the four conditions for `I ⊆ D̂`.
///
/// The meet condition of types 3 and 4 needs `D∩I∖{μ}` to be nonempty.
/// Reading an empty meet as `[n]` would let type 3 fire for `μ = [n]` and
/// return `D` itself, which does not cover `D`.
pub fn applicable_types(d: &Code, iso: &IsolatedSubset) -> Result<Vec<CoverType>> {
    check_host(d, iso)?;
    let mu = iso.mu;
    let mu_in_d = d.contains(mu);
    let escapes = d.words().iter().any(|&w| mu.is_subset(w) && !iso.contains(w));
    let rest: Vec<Codeword> = d.words().iter().copied().filter(|&w| w != mu && iso.contains(w)).collect();
    let meet = rest.iter().fold(Codeword::full(d.n()), |acc, &w| acc.intersection(w));
    let meet_ok = !rest.is_empty() && meet == mu;
    let mut out = Vec::new();
    if mu_in_d {
        out.push(CoverType::KeepBoth);
    }
    if mu_in_d && escapes {
        out.push(CoverType::LiftMu);
    }
    if mu_in_d && meet_ok {
        out.push(CoverType::KeepMu);
    }
    if !mu_in_d && meet_ok && escapes {
        out.push(CoverType::Neither);
    }
    Ok(out)
}

/// A covering code of `base` together with the data it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverConstruction {
    pub base: Code,
    pub completion: Code,
    pub isolated: IsolatedSubset,
    pub cover_type: CoverType,
    pub alpha: usize,
    pub result: Code,
}

impl CoverConstruction {
    /// The surjection `result → base` deleting `α`.
    pub fn projection(&self) -> Result<Morphism> {
        let map: CodeMap = self.result.words().iter().map(|&w| (w, w.without(self.alpha))).collect();
        recover_determining_trunks(&self.result, &self.base, &map)
    }
}

impl Serialize for CoverConstruction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            base: &'a Code,
            isolated: &'a [Codeword],
            mu: Codeword,
            #[serde(rename = "type")]
            cover_type: CoverType,
            result: &'a Code,
        }
        Repr {
            base: &self.base,
            isolated: &self.isolated.members,
            mu: self.isolated.mu,
            cover_type: self.cover_type,
            result: &self.result,
        }
        .serialize(serializer)
    }
}

pub fn construct_cover(d: &Code, iso: &IsolatedSubset, t: CoverType) -> Result<CoverConstruction> {
    if !applicable_types(d, iso)?.contains(&t) {
        return Err(Error::TypeNotApplicable(t.number()));
    }
    let n = d.n();
    if n + 1 > Codeword::MAX_NEURONS {
        return Err(Error::TooManyNeurons(n + 1));
    }
    let alpha = n + 1;
    let mu = iso.mu;
    let mut words: Vec<Codeword> = Vec::with_capacity(d.len() + 1);
    for &w in d.words() {
        if !iso.contains(w) {
            words.push(w);
        } else if !(t == CoverType::KeepMu && w == mu) {
            words.push(w.with(alpha));
        }
    }
    if matches!(t, CoverType::KeepBoth | CoverType::KeepMu) {
        words.push(mu);
    }
    let result = match Code::new(alpha, words) {
        Ok(code) => code,
        Err(Error::MissingEmptyCodeword) => return Err(Error::InvalidCover),
        Err(e) => return Err(e),
    };
    Ok(CoverConstruction {
        base: d.clone(),
        completion: iso.host.clone(),
        isolated: iso.clone(),
        cover_type: t,
        alpha,
        result,
    })
}

/// `C_[I] = {μ} ∪ C∖I ∪ (I)_α` for an intersection-complete `C`.
pub fn int_comp_cover(c: &Code, iso: &IsolatedSubset) -> Result<Code> {
    require_complete(c)?;
    if iso.host != *c {
        return Err(Error::HostMismatch);
    }
    let alpha = c.n() + 1;
    if alpha > Codeword::MAX_NEURONS {
        return Err(Error::TooManyNeurons(alpha));
    }
    let words = c.words().iter().map(|&w| if iso.contains(w) { w.with(alpha) } else { w }).chain([iso.mu]);
    Code::new(alpha, words)
}

/// One construction per isomorphism class of covering codes of `d`.
///
/// Candidates are generated in enumeration order of `(I, type)` and
/// deduplicated by canonical key, keeping the first.
pub fn all_covering_codes(d: &Code) -> Result<Vec<CoverConstruction>> {
    let hat = d.intersection_completion();
    let pairs: Vec<(IsolatedSubset, CoverType)> = isolated_subsets(&hat)?
        .into_iter()
        .map(|iso| Ok(applicable_types(d, &iso)?.into_iter().map(move |t| (iso.clone(), t))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let built: Vec<Option<(String, CoverConstruction)>> = pairs
        .par_iter()
        .map(|(iso, t)| match construct_cover(d, iso, *t) {
            Ok(cc) => Ok(Some((canonical_key(&cc.result), cc))),
            Err(Error::InvalidCover) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut seen: HashMap<String, ()> = HashMap::new();
    let mut out = Vec::new();
    for (key, cc) in built.into_iter().flatten() {
        if seen.insert(key, ()).is_none() {
            out.push(cc);
        }
    }
    Ok(out)
}

/// Checks that the completion of the construction equals `D̂_[I]`.
pub fn verify_cover_completion(d: &Code, cc: &CoverConstruction) -> bool {
    let hat = d.intersection_completion();
    match int_comp_cover(&hat, &cc.isolated) {
        Ok(expected) => cc.result.intersection_completion() == expected,
        Err(_) => false,
    }
}

/// The five statements that must agree for a surjection `f: C → D` and its
/// extension `g: Ĉ → D̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackChain {
    pub completion_covers: bool,
    pub completion_has_one_more_trunk: bool,
    pub completion_has_one_more_codeword: bool,
    pub has_one_more_trunk: bool,
    pub covers: bool,
}

impl PullbackChain {
    pub fn agrees(&self) -> bool {
        let v = self.covers;
        self.completion_covers == v
            && self.completion_has_one_more_trunk == v
            && self.completion_has_one_more_codeword == v
            && self.has_one_more_trunk == v
    }
}

pub fn pullback_chain(f: &Morphism) -> Result<PullbackChain> {
    let c = f.source();
    let d = f.image();
    let g = extend_to_completion(f);
    let (hc, hd) = (c.intersection_completion(), d.intersection_completion());
    if g.image() != hd {
        return Err(Error::NotSurjective);
    }
    if c.words().iter().any(|&w| g.apply(w) != f.apply(w)) {
        return Err(Error::Inconsistent("extension does not restrict to the original morphism".into()));
    }
    Ok(PullbackChain {
        completion_covers: covers(&hc, &hd)?,
        completion_has_one_more_trunk: hc.trunk_count() == hd.trunk_count() + 1,
        completion_has_one_more_codeword: hc.len() == hd.len() + 1,
        has_one_more_trunk: c.trunk_count() == d.trunk_count() + 1,
        covers: covers(c, &d)?,
    })
}

/// `Ĉ` covers `D̂` exactly when `C` covers `D`, for the image `D` of `f`.
pub fn verify_extension_pullback(f: &Morphism) -> Result<bool> {
    Ok(pullback_chain(f)?.agrees())
}
