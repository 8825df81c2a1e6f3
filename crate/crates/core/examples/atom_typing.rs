//! Types a small ligand under each scheme and round-trips it through the
//! binary record format.
//!
//! cargo run --example atom_typing

use voxscore::moldata::{assign_types, parse_text, read_gninatypes, write_gninatypes, AtomTypeScheme, Channel};

const LIGAND: &str = "\
molecule phenol
C  0.000  1.396 0.0 ligand aromatic hydrophobe
C  1.209  0.698 0.0 ligand aromatic hydrophobe
C  1.209 -0.698 0.0 ligand aromatic hydrophobe
C  0.000 -1.396 0.0 ligand aromatic
C -1.209 -0.698 0.0 ligand aromatic hydrophobe
C -1.209  0.698 0.0 ligand aromatic hydrophobe
O  0.000 -2.760 0.0 ligand donor acceptor
H  0.900 -3.100 0.0 ligand
";

fn main() {
    let mol = parse_text(LIGAND.as_bytes()).expect("inline ligand parses");
    for scheme in [AtomTypeScheme::Smina34, AtomTypeScheme::Element18, AtomTypeScheme::Binary2] {
        let (typed, report) = assign_types(&mol, scheme);
        println!(
            "{} ({} channels): {} typed, {} hydrogens dropped, {} unknown",
            scheme.name(),
            scheme.channel_count(),
            report.typed,
            report.hydrogens,
            report.unknown
        );
        for a in &typed.atoms {
            let name = match a.channel {
                Channel::Index(c) => scheme.channel_name(c).unwrap_or_default(),
                Channel::Dropped | Channel::Unassigned => "-".to_string(),
            };
            println!("  {:<2} {:<28} r={:.2}", a.element.symbol(), name, a.vdw_radius);
        }
    }

    let (typed, _) = assign_types(&mol, AtomTypeScheme::Smina34);
    let bytes = write_gninatypes(&typed).expect("typed molecule encodes");
    let back = read_gninatypes(&bytes).expect("records decode");
    println!("{} bytes for {} atoms, {} atoms read back", bytes.len(), typed.len(), back.len());
}
