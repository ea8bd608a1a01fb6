use super::elements::Element;

/// Hydrogens implied for an unbracketed organic-subset atom, or `None` when the
/// bond-order sum exceeds every default valence of the element.
///
/// Aromatic atoms count one per aromatic bond and take one fewer hydrogen when
/// the remaining valence permits it (the ring pi contribution).
pub fn implicit_hydrogens(element: Element, aromatic: bool, bond_sum: u8) -> Option<u8> {
    let target = element
        .default_valences()
        .iter()
        .copied()
        .find(|&v| v >= bond_sum)?;
    let mut remaining = target - bond_sum;
    if aromatic && remaining > 0 {
        remaining -= 1;
    }
    Some(remaining)
}
