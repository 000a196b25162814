//! TOML descriptions of systems, diagrams, named sets and elements.
//!
//! ```toml
//! name = "example1"
//! alphabet = "01"
//!
//! [system]
//! kind = "substitution"            # substitution | sturmian | sft
//! rules = { "0" = "0011", "1" = "0101" }
//! # alpha = [p, q, d, r]           # sturmian: (p + q√d) / r
//! # forbidden = ["11"]             # sft
//!
//! [[points]]
//! seed = "1.0"                     # substitution: dotted seed
//! power = 1
//! anchor = 3
//!
//! [[points]]
//! # t = [1, 0, 0, 2]               # sturmian: parameter in [0, 1)
//!
//! [sets]
//! A = "tile(0, 0)"
//!
//! [elements]
//! s = "sigmaU(A)"
//!
//! [caps]
//! order = 720
//! span = 64
//! depth = 64
//! return_time = 256
//!
//! [diagram]                        # optional Bratteli diagram
//! levels = [[[1, 1]]]
//! repeat = [[2, 2], [2, 2]]
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::bratteli::{BratteliDiagram, Incidence};
use crate::dsl::Env;
use crate::error::{Error, Result};
use crate::quad::QuadReal;
use crate::subshift::{Alphabet, PointHandle, SubshiftSystem};

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub name: Option<String>,
    pub alphabet: Option<String>,
    pub system: Option<SystemSection>,
    #[serde(default)]
    pub points: Vec<PointSection>,
    #[serde(default)]
    pub sets: BTreeMap<String, String>,
    #[serde(default)]
    pub elements: BTreeMap<String, String>,
    #[serde(default)]
    pub caps: Caps,
    pub diagram: Option<DiagramSection>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub kind: String,
    pub rules: Option<BTreeMap<String, String>>,
    pub alpha: Option<[i64; 4]>,
    pub forbidden: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSection {
    pub seed: Option<String>,
    pub power: Option<usize>,
    pub anchor: Option<usize>,
    pub t: Option<[i64; 4]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSection {
    pub levels: Vec<Incidence>,
    pub repeat: Option<Incidence>,
}

/// Resource limits.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest element order explored.
    pub order: usize,
    /// Largest cylinder radius tried by the decomposition.
    pub span: usize,
    /// Depth for diagram computations.
    pub depth: usize,
    /// Largest first-return time.
    pub return_time: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order: crate::element::DEFAULT_ORDER_CAP,
            span: 64,
            depth: 64,
            return_time: 256,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.span == 0 || self.depth == 0 || self.return_time == 0 {
            return Err(Error::Config("caps must be positive".into()));
        }
        Ok(())
    }
}

fn quad(v: [i64; 4], what: &str) -> Result<QuadReal> {
    let [p, q, d, r] = v;
    if r == 0 || d < 0 {
        return Err(Error::Config(format!(
            "{what} = {v:?} is not (p + q√d)/r with r ≠ 0, d ≥ 0"
        )));
    }
    Ok(QuadReal::new(p, q, d as u64, r))
}

/// A loaded configuration: the system (if any) with its named objects, and
/// the diagram (if any).
#[derive(Clone, Debug)]
pub struct Session {
    pub name: String,
    pub env: Option<Env>,
    pub diagram: Option<BratteliDiagram>,
    pub caps: Caps,
}

impl Session {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_config(cfg)
    }

    pub fn from_config(cfg: ConfigFile) -> Result<Self> {
        cfg.caps.validate()?;
        let name = cfg.name.clone().unwrap_or_else(|| "system".into());
        let diagram = match &cfg.diagram {
            Some(d) => Some(BratteliDiagram::new(d.levels.clone(), d.repeat.clone())?),
            None => None,
        };
        let env = match &cfg.system {
            Some(s) => Some(build_env(&name, &cfg, s)?),
            None => None,
        };
        if env.is_none() && diagram.is_none() {
            return Err(Error::Config(
                "config defines neither [system] nor [diagram]".into(),
            ));
        }
        Ok(Session {
            name,
            env,
            diagram,
            caps: cfg.caps,
        })
    }

    pub fn system(&self) -> Result<&Arc<SubshiftSystem>> {
        self.env
            .as_ref()
            .map(|e| &e.sys)
            .ok_or_else(|| Error::Config("config has no [system]".into()))
    }

    pub fn env(&self) -> Result<&Env> {
        self.env
            .as_ref()
            .ok_or_else(|| Error::Config("config has no [system]".into()))
    }

    pub fn env_mut(&mut self) -> Result<&mut Env> {
        self.env
            .as_mut()
            .ok_or_else(|| Error::Config("config has no [system]".into()))
    }

    pub fn diagram(&self) -> Result<&BratteliDiagram> {
        self.diagram
            .as_ref()
            .ok_or_else(|| Error::Config("config has no [diagram]".into()))
    }
}

fn build_env(name: &str, cfg: &ConfigFile, s: &SystemSection) -> Result<Env> {
    let sys = match s.kind.as_str() {
        "sturmian" => {
            let alpha = quad(
                s.alpha
                    .ok_or_else(|| Error::Config("sturmian system needs alpha".into()))?,
                "alpha",
            )?;
            let points = cfg
                .points
                .iter()
                .map(|p| {
                    let t =
                        p.t.ok_or_else(|| Error::Config("sturmian points need t".into()))?;
                    Ok(PointHandle::rotation(quad(t, "t")?))
                })
                .collect::<Result<_>>()?;
            SubshiftSystem::sturmian(name, alpha, points)?
        }
        "substitution" => {
            let alphabet = parse_alphabet(cfg)?;
            let rules = s
                .rules
                .as_ref()
                .ok_or_else(|| Error::Config("substitution needs rules".into()))?;
            let mut images = Vec::new();
            for l in alphabet.letters() {
                let key = alphabet.symbol(l).to_string();
                let img = rules
                    .get(&key)
                    .ok_or_else(|| Error::Config(format!("no rule for letter {key:?}")))?;
                images.push(alphabet.parse(img)?);
            }
            if rules.len() != alphabet.len() {
                return Err(Error::Config(
                    "rules name letters outside the alphabet".into(),
                ));
            }
            let sub = crate::subshift::Substitution::new(alphabet.len(), images.clone())?;
            let points = cfg
                .points
                .iter()
                .map(|p| {
                    let seed = p
                        .seed
                        .as_ref()
                        .ok_or_else(|| Error::Config("substitution points need a seed".into()))?;
                    PointHandle::substitutive(&alphabet, &sub, seed, p.power.unwrap_or(1), p.anchor)
                })
                .collect::<Result<_>>()?;
            SubshiftSystem::substitution(name, alphabet, images, points)?
        }
        "sft" => {
            let alphabet = parse_alphabet(cfg)?;
            let forbidden = s
                .forbidden
                .as_ref()
                .ok_or_else(|| Error::Config("sft needs forbidden words".into()))?
                .iter()
                .map(|w| alphabet.parse(w))
                .collect::<Result<_>>()?;
            SubshiftSystem::sft(name, alphabet, forbidden)?
        }
        other => return Err(Error::Config(format!("unknown system kind {other:?}"))),
    };
    let mut env = Env::new(&sys);
    env.return_cap = cfg.caps.return_time;
    define_all(&cfg.sets, |n, src| env.define_set(n, src))?;
    define_all(&cfg.elements, |n, src| env.define_element(n, src))?;
    Ok(env)
}

fn parse_alphabet(cfg: &ConfigFile) -> Result<Alphabet> {
    let a = cfg
        .alphabet
        .as_ref()
        .ok_or_else(|| Error::Config("missing alphabet".into()))?;
    Alphabet::new(a.chars())
}

/// Definitions may refer to each other in any order; resolves in passes.
fn define_all(
    defs: &BTreeMap<String, String>,
    mut define: impl FnMut(&str, &str) -> Result<()>,
) -> Result<()> {
    let mut pending: Vec<(&String, &String)> = defs.iter().collect();
    while !pending.is_empty() {
        let mut next = Vec::new();
        let mut last_err = None;
        for (n, src) in &pending {
            match define(n, src) {
                Ok(()) => {}
                Err(e @ Error::Parse { .. }) => {
                    last_err = Some(Error::Config(format!("{n}: {e}")));
                    next.push((*n, *src));
                }
                Err(e) => return Err(Error::Config(format!("{n}: {e}"))),
            }
        }
        if next.len() == pending.len() {
            return Err(last_err.expect("a failed definition"));
        }
        pending = next;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_a_substitution_with_sets() {
        let s = Session::from_toml(
            r#"
            name = "ex"
            alphabet = "01"
            [system]
            kind = "substitution"
            rules = { "0" = "0011", "1" = "0101" }
            [[points]]
            seed = "1.0"
            [sets]
            B = "A | shift(A, 1)"
            A = "tile(0, 0)"
            [elements]
            s = "sigmaU(A)"
            "#,
        )
        .unwrap();
        let env = s.env().unwrap();
        assert_eq!(env.sets.len(), 2);
        assert!(env.elements["s"].pow(2).unwrap().is_identity());
        assert_eq!(s.system().unwrap().points().len(), 1);
    }

    #[test]
    fn loads_sturmian_and_diagram() {
        let s = Session::from_toml(
            r#"
            [system]
            kind = "sturmian"
            alpha = [-1, 1, 2, 1]
            [[points]]
            t = [1, 0, 0, 2]
            [[points]]
            t = [1, 0, 0, 3]
            [diagram]
            levels = [[[1, 1]]]
            repeat = [[2, 2], [2, 2]]
            [caps]
            order = 100
            "#,
        )
        .unwrap();
        assert_eq!(s.caps.order, 100);
        assert_eq!(s.caps.span, 64);
        assert!(s.diagram().unwrap().is_stationary());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(Session::from_toml("name = \"x\"").is_err());
        assert!(Session::from_toml("[system]\nkind = \"torus\"").is_err());
        assert!(Session::from_toml("[system]\nkind = \"sturmian\"\nalpha = [1, 0, 0, 2]").is_err());
        assert!(Session::from_toml(
            "[system]\nkind = \"sturmian\"\nalpha = [-1, 1, 2, 1]\n[caps]\norder = 0"
        )
        .is_err());
        assert!(Session::from_toml("bogus = 1\n[system]\nkind = \"sturmian\"").is_err());
        let cyclic =
            "[system]\nkind = \"sturmian\"\nalpha = [-1, 1, 2, 1]\n[sets]\nA = \"B\"\nB = \"A\"";
        assert!(matches!(Session::from_toml(cyclic), Err(Error::Config(_))));
    }
}
