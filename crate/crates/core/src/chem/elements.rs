//! Periodic table data: symbols and most-abundant-isotope masses.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// (symbol, mass of the most abundant isotope in Da)
const TABLE: [(&str, f64); 118] = [
    ("H", 1.00782503207),
    ("He", 4.00260325415),
    ("Li", 7.01600455),
    ("Be", 9.0121822),
    ("B", 11.0093054),
    ("C", 12.0),
    ("N", 14.0030740048),
    ("O", 15.99491461956),
    ("F", 18.99840322),
    ("Ne", 19.9924401754),
    ("Na", 22.9897692809),
    ("Mg", 23.985041700),
    ("Al", 26.98153863),
    ("Si", 27.9769265325),
    ("P", 30.97376163),
    ("S", 31.97207100),
    ("Cl", 34.96885268),
    ("Ar", 39.9623831225),
    ("K", 38.96370668),
    ("Ca", 39.96259098),
    ("Sc", 44.9559119),
    ("Ti", 47.9479463),
    ("V", 50.9439595),
    ("Cr", 51.9405075),
    ("Mn", 54.9380451),
    ("Fe", 55.9349375),
    ("Co", 58.9331950),
    ("Ni", 57.9353429),
    ("Cu", 62.9295975),
    ("Zn", 63.9291422),
    ("Ga", 68.9255736),
    ("Ge", 73.9211778),
    ("As", 74.9215965),
    ("Se", 79.9165213),
    ("Br", 78.9183371),
    ("Kr", 83.911507),
    ("Rb", 84.911789738),
    ("Sr", 87.9056121),
    ("Y", 88.9058483),
    ("Zr", 89.9047044),
    ("Nb", 92.9063781),
    ("Mo", 97.9054082),
    ("Tc", 97.907216),
    ("Ru", 101.9043493),
    ("Rh", 102.905504),
    ("Pd", 105.903486),
    ("Ag", 106.905097),
    ("Cd", 113.9033585),
    ("In", 114.903878),
    ("Sn", 119.9021947),
    ("Sb", 120.9038157),
    ("Te", 129.9062244),
    ("I", 126.904473),
    ("Xe", 131.9041535),
    ("Cs", 132.905451933),
    ("Ba", 137.9052472),
    ("La", 138.9063533),
    ("Ce", 139.9054387),
    ("Pr", 140.9076528),
    ("Nd", 141.9077233),
    ("Pm", 144.912749),
    ("Sm", 151.9197324),
    ("Eu", 152.9212303),
    ("Gd", 157.9241039),
    ("Tb", 158.9253468),
    ("Dy", 163.9291748),
    ("Ho", 164.9303221),
    ("Er", 165.9302931),
    ("Tm", 168.9342133),
    ("Yb", 173.9388621),
    ("Lu", 174.9407718),
    ("Hf", 179.9465500),
    ("Ta", 180.9479958),
    ("W", 183.9509312),
    ("Re", 186.9557531),
    ("Os", 191.9614807),
    ("Ir", 192.9629264),
    ("Pt", 194.9647911),
    ("Au", 196.9665687),
    ("Hg", 201.970643),
    ("Tl", 204.9744275),
    ("Pb", 207.9766521),
    ("Bi", 208.9803987),
    ("Po", 208.9824304),
    ("At", 209.987148),
    ("Rn", 222.0175777),
    ("Fr", 223.0197359),
    ("Ra", 226.0254098),
    ("Ac", 227.0277521),
    ("Th", 232.0380553),
    ("Pa", 231.0358840),
    ("U", 238.0507882),
    ("Np", 237.0481734),
    ("Pu", 244.064204),
    ("Am", 243.0613811),
    ("Cm", 247.070354),
    ("Bk", 247.070307),
    ("Cf", 251.079587),
    ("Es", 252.082980),
    ("Fm", 257.095105),
    ("Md", 258.098431),
    ("No", 259.10103),
    ("Lr", 262.10963),
    ("Rf", 267.12179),
    ("Db", 268.12567),
    ("Sg", 271.13393),
    ("Bh", 272.13826),
    ("Hs", 270.13429),
    ("Mt", 276.15159),
    ("Ds", 281.16451),
    ("Rg", 280.16514),
    ("Cn", 285.17712),
    ("Nh", 284.17873),
    ("Fl", 289.19042),
    ("Mc", 288.19274),
    ("Lv", 293.20449),
    ("Ts", 292.20746),
    ("Og", 294.21392),
];

/// Exact masses of isotopes commonly used as labels, keyed by (Z, mass number).
const LABELED_ISOTOPES: [((u8, u16), f64); 24] = [
    ((1, 2), 2.01410177812),
    ((1, 3), 3.0160492779),
    ((5, 10), 10.0129370),
    ((6, 11), 11.0114336),
    ((6, 13), 13.0033548378),
    ((6, 14), 14.0032419894),
    ((7, 15), 15.0001088982),
    ((8, 17), 16.99913170),
    ((8, 18), 17.9991610),
    ((9, 18), 18.0009380),
    ((14, 29), 28.9764947),
    ((14, 30), 29.97377017),
    ((15, 32), 31.97390727),
    ((16, 33), 32.97145876),
    ((16, 34), 33.96786690),
    ((16, 35), 34.96903216),
    ((16, 36), 35.96708076),
    ((17, 36), 35.96830698),
    ((17, 37), 36.96590259),
    ((35, 79), 78.9183371),
    ((35, 81), 80.9162906),
    ((53, 123), 122.905589),
    ((53, 125), 124.9046302),
    ((53, 131), 130.9061246),
];

/// A chemical element identified by its atomic number (1..=118).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u8);

impl Element {
    pub const H: Element = Element(1);
    pub const B: Element = Element(5);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);
    pub const F: Element = Element(9);
    pub const P: Element = Element(15);
    pub const S: Element = Element(16);
    pub const CL: Element = Element(17);
    pub const BR: Element = Element(35);
    pub const I: Element = Element(53);

    pub fn from_atomic_number(z: u8) -> Option<Element> {
        (1..=118).contains(&z).then_some(Element(z))
    }

    /// Case-sensitive lookup of a standard symbol ("C", "Cl", ...).
    pub fn from_symbol(symbol: &str) -> Option<Element> {
        TABLE
            .iter()
            .position(|(s, _)| *s == symbol)
            .map(|i| Element(i as u8 + 1))
    }

    pub fn atomic_number(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        TABLE[self.0 as usize - 1].0
    }

    /// Mass of the most abundant isotope.
    pub fn monoisotopic_mass(self) -> f64 {
        TABLE[self.0 as usize - 1].1
    }

    /// Mass number of the most abundant isotope.
    pub fn most_abundant_mass_number(self) -> u16 {
        self.monoisotopic_mass().round() as u16
    }

    /// Mass of a specific isotope. Uses tabulated values for common labels and
    /// otherwise shifts the most abundant isotope's mass by the nucleon difference.
    pub fn isotope_mass(self, mass_number: u16) -> f64 {
        if let Some((_, m)) = LABELED_ISOTOPES
            .iter()
            .find(|((z, a), _)| *z == self.0 && *a == mass_number)
        {
            return *m;
        }
        let base = self.most_abundant_mass_number();
        self.monoisotopic_mass() + (mass_number as f64 - base as f64)
    }

    /// Members of the SMILES organic subset may be written without brackets.
    pub fn is_organic_subset(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 9 | 15 | 16 | 17 | 35 | 53)
    }

    /// Elements that may carry an aromatic (lowercase) symbol.
    pub fn can_be_aromatic(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 15 | 16 | 33 | 34 | 52)
    }

    /// Default valences used for implicit hydrogen assignment on organic-subset atoms.
    pub fn default_valences(self) -> &'static [u8] {
        match self.0 {
            5 => &[3],
            6 => &[4],
            7 => &[3],
            8 => &[2],
            15 => &[3, 5],
            16 => &[2, 4, 6],
            9 | 17 | 35 | 53 => &[1],
            _ => &[],
        }
    }

    pub fn is_halogen(self) -> bool {
        matches!(self.0, 9 | 17 | 35 | 53 | 85)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Element::from_symbol(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown element symbol {s:?}")))
    }
}
