use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chem::{BondOrder, Element};

const BUNDLED: &str = include_str!("../../data/forcefield_v1.toml");

#[derive(Debug, thiserror::Error)]
pub enum ParamsError {
    #[error("force-field file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("force-field constant `{0}` must be positive and finite")]
    NonPositive(&'static str),
    #[error("unknown element `{0}` in bond table")]
    Element(String),
    #[error("unknown bond order `{0}` in bond table")]
    Order(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleRest {
    pub sp3: f64,
    pub sp2: f64,
    pub sp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct BondRow {
    a: String,
    b: String,
    order: String,
    length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawParams {
    version: u32,
    bond_k: f64,
    angle_k: f64,
    repulsion_sigma: f64,
    repulsion_k: f64,
    max_iters: usize,
    step_size: f64,
    grad_tol: f64,
    angle_rest: AngleRest,
    covalent_radius: BTreeMap<String, f64>,
    shortening: BTreeMap<String, f64>,
    bond: Vec<BondRow>,
}

/// Bond, angle and repulsion constants plus optimizer settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceFieldParams {
    pub version: u32,
    pub bond_rest_lengths: BTreeMap<(u8, u8, BondOrder), f64>,
    pub covalent_radius: BTreeMap<u8, f64>,
    pub default_radius: f64,
    pub shortening: [f64; 4],
    pub bond_k: f64,
    pub angle_rest: AngleRest,
    pub angle_k: f64,
    pub repulsion_sigma: f64,
    pub repulsion_k: f64,
    pub max_iters: usize,
    pub step_size: f64,
    pub grad_tol: f64,
}

fn order_from_str(s: &str) -> Result<BondOrder, ParamsError> {
    Ok(match s {
        "single" => BondOrder::Single,
        "double" => BondOrder::Double,
        "triple" => BondOrder::Triple,
        "aromatic" => BondOrder::Aromatic,
        _ => return Err(ParamsError::Order(s.to_string())),
    })
}

fn order_slot(o: BondOrder) -> usize {
    match o {
        BondOrder::Single => 0,
        BondOrder::Double => 1,
        BondOrder::Triple => 2,
        BondOrder::Aromatic => 3,
    }
}

impl Default for ForceFieldParams {
    fn default() -> Self {
        Self::from_toml(BUNDLED).expect("bundled force field is valid")
    }
}

impl ForceFieldParams {
    pub fn from_toml(text: &str) -> Result<Self, ParamsError> {
        let raw: RawParams = toml::from_str(text)?;
        let mut bond_rest_lengths = BTreeMap::new();
        for row in &raw.bond {
            let za = Element::from_symbol(&row.a)
                .ok_or_else(|| ParamsError::Element(row.a.clone()))?
                .atomic_number();
            let zb = Element::from_symbol(&row.b)
                .ok_or_else(|| ParamsError::Element(row.b.clone()))?
                .atomic_number();
            let order = order_from_str(&row.order)?;
            bond_rest_lengths.insert((za.min(zb), za.max(zb), order), row.length);
        }
        let mut covalent_radius = BTreeMap::new();
        let mut default_radius = 1.5;
        for (sym, r) in &raw.covalent_radius {
            if sym == "default" {
                default_radius = *r;
            } else {
                let z = Element::from_symbol(sym)
                    .ok_or_else(|| ParamsError::Element(sym.clone()))?
                    .atomic_number();
                covalent_radius.insert(z, *r);
            }
        }
        let mut shortening = [0.0; 4];
        for (name, v) in &raw.shortening {
            shortening[order_slot(order_from_str(name)?)] = *v;
        }
        let p = ForceFieldParams {
            version: raw.version,
            bond_rest_lengths,
            covalent_radius,
            default_radius,
            shortening,
            bond_k: raw.bond_k,
            angle_rest: raw.angle_rest,
            angle_k: raw.angle_k,
            repulsion_sigma: raw.repulsion_sigma,
            repulsion_k: raw.repulsion_k,
            max_iters: raw.max_iters,
            step_size: raw.step_size,
            grad_tol: raw.grad_tol,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let checks: [(&'static str, f64); 10] = [
            ("bond_k", self.bond_k),
            ("angle_k", self.angle_k),
            ("repulsion_sigma", self.repulsion_sigma),
            ("repulsion_k", self.repulsion_k),
            ("step_size", self.step_size),
            ("grad_tol", self.grad_tol),
            ("angle_rest.sp3", self.angle_rest.sp3),
            ("angle_rest.sp2", self.angle_rest.sp2),
            ("angle_rest.sp", self.angle_rest.sp),
            ("default radius", self.default_radius),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(ParamsError::NonPositive(name));
            }
        }
        if self.max_iters == 0 {
            return Err(ParamsError::NonPositive("max_iters"));
        }
        if self
            .bond_rest_lengths
            .values()
            .chain(self.covalent_radius.values())
            .any(|v| !(v.is_finite() && *v > 0.0))
        {
            return Err(ParamsError::NonPositive("bond length"));
        }
        Ok(())
    }

    /// Rest length for a bond; tabulated when available, otherwise a sum of
    /// covalent radii shortened by bond order.
    pub fn bond_rest_length(&self, a: Element, b: Element, order: BondOrder) -> f64 {
        let (za, zb) = (a.atomic_number(), b.atomic_number());
        if let Some(&r) = self.bond_rest_lengths.get(&(za.min(zb), za.max(zb), order)) {
            return r;
        }
        let radius = |z: u8| *self.covalent_radius.get(&z).unwrap_or(&self.default_radius);
        (radius(za) + radius(zb) - self.shortening[order_slot(order)]).max(0.5)
    }
}
