use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::canon::write_smiles;
use super::graph::MolGraph;
use super::smiles::{parse_smiles, SmilesError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReactionRole {
    Reactant,
    Agent,
    Product,
}

impl ReactionRole {
    pub fn as_str(self) -> &'static str {
        match self {
            ReactionRole::Reactant => "reactant",
            ReactionRole::Agent => "agent",
            ReactionRole::Product => "product",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub reactants: Vec<MolGraph>,
    pub agents: Vec<MolGraph>,
    pub products: Vec<MolGraph>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReactionError {
    #[error("reaction must have exactly two '>' separators, found {found}")]
    Separators { found: usize },
    #[error("reaction has no {side}")]
    MissingSide { side: &'static str },
    #[error("{role} {index} (starting at byte {offset}): {source}")]
    Component {
        role: &'static str,
        index: usize,
        offset: usize,
        #[source]
        source: SmilesError,
    },
}

/// Parses `reactants>agents>products`, each side a `.`-separated list.
pub fn parse_reaction(text: &str) -> Result<Reaction, ReactionError> {
    let text = text.trim();
    let found = text.matches('>').count();
    if found != 2 {
        return Err(ReactionError::Separators { found });
    }
    let mut sides = text.splitn(3, '>');
    let (r, a, p) = (
        sides.next().unwrap(),
        sides.next().unwrap(),
        sides.next().unwrap(),
    );
    let a_start = r.len() + 1;
    let p_start = a_start + a.len() + 1;
    let reactants = parse_side(r, 0, ReactionRole::Reactant)?;
    let agents = parse_side(a, a_start, ReactionRole::Agent)?;
    let products = parse_side(p, p_start, ReactionRole::Product)?;
    if reactants.is_empty() {
        return Err(ReactionError::MissingSide { side: "reactants" });
    }
    if products.is_empty() {
        return Err(ReactionError::MissingSide { side: "products" });
    }
    Ok(Reaction {
        reactants,
        agents,
        products,
    })
}

fn parse_side(side: &str, base: usize, role: ReactionRole) -> Result<Vec<MolGraph>, ReactionError> {
    if side.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = base;
    for (index, part) in side.split('.').enumerate() {
        let g = parse_smiles(part).map_err(|source| ReactionError::Component {
            role: role.as_str(),
            index,
            offset,
            source,
        })?;
        out.push(g);
        offset += part.len() + 1;
    }
    Ok(out)
}

impl Reaction {
    pub fn role(&self, role: ReactionRole) -> &[MolGraph] {
        match role {
            ReactionRole::Reactant => &self.reactants,
            ReactionRole::Agent => &self.agents,
            ReactionRole::Product => &self.products,
        }
    }

    /// Roles with at least one molecule, in reactant/agent/product order.
    pub fn present_roles(&self) -> Vec<ReactionRole> {
        [ReactionRole::Reactant, ReactionRole::Agent, ReactionRole::Product]
            .into_iter()
            .filter(|r| !self.role(*r).is_empty())
            .collect()
    }

    pub fn molecules(&self) -> impl Iterator<Item = (ReactionRole, &MolGraph)> {
        self.reactants
            .iter()
            .map(|m| (ReactionRole::Reactant, m))
            .chain(self.agents.iter().map(|m| (ReactionRole::Agent, m)))
            .chain(self.products.iter().map(|m| (ReactionRole::Product, m)))
    }

    /// Canonical reaction SMILES; molecules within each side keep input order.
    pub fn to_smiles(&self) -> String {
        let side = |ms: &[MolGraph]| ms.iter().map(write_smiles).collect::<Vec<_>>().join(".");
        format!(
            "{}>{}>{}",
            side(&self.reactants),
            side(&self.agents),
            side(&self.products)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn esterification_shape() {
        let r = parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O").unwrap();
        assert_eq!((r.reactants.len(), r.agents.len(), r.products.len()), (2, 0, 2));
        assert_eq!(r.present_roles(), vec![ReactionRole::Reactant, ReactionRole::Product]);
    }

    #[test]
    fn with_agent() {
        let r = parse_reaction("C>O>C").unwrap();
        assert_eq!((r.reactants.len(), r.agents.len(), r.products.len()), (1, 1, 1));
    }

    #[test]
    fn missing_side() {
        assert_eq!(
            parse_reaction("CCO>>"),
            Err(ReactionError::MissingSide { side: "products" })
        );
        assert_eq!(
            parse_reaction(">>CCO"),
            Err(ReactionError::MissingSide { side: "reactants" })
        );
        assert_eq!(parse_reaction("CCO>CC"), Err(ReactionError::Separators { found: 1 }));
    }

    #[test]
    fn component_error_carries_position() {
        match parse_reaction("CCO.C1CC>>CC") {
            Err(ReactionError::Component {
                role, index, offset, ..
            }) => {
                assert_eq!((role, index, offset), ("reactant", 1, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_reaction("CC>>C(C"),
            Err(ReactionError::Component { role: "product", offset: 4, .. })
        ));
    }
}
