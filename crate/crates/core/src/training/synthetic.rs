//! Toy complexes with a planted contact signal.
//!
//! Each complex is a small receptor patch and a three-atom ligand. In a
//! positive pose one ligand atom sits at contact distance from a receptor
//! atom; the negative pose is the same ligand pushed a further 6 Å away.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use crate::moldata::{assign_types, AtomFlags, AtomTypeScheme, Element, Molecule, Role, TypedAtom};

use super::{DatasetIndex, MemoryStore, PoseRecord, Source};

/// Distance from the contacting ligand atom to its receptor partner.
pub const CONTACT_DISTANCE: f64 = 3.5;
/// Extra displacement of negative poses.
pub const DECOY_SHIFT: f64 = 6.0;

fn random_dir<R: Rng>(rng: &mut R) -> [f64; 3] {
    UnitSphere.sample(rng)
}

fn add(a: [f64; 3], b: [f64; 3], k: f64) -> [f64; 3] {
    [a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2]]
}

/// Closest allowed approach of any ligand atom to the receptor.
const MIN_SEPARATION: f64 = 3.0;

fn place_ligand<R: Rng>(rng: &mut R, receptor: &[TypedAtom], positive: bool) -> Vec<TypedAtom> {
    let anchor = receptor[rng.random_range(0..receptor.len())].position;
    let out = random_dir(rng);
    let mut q = add(anchor, out, CONTACT_DISTANCE);
    if !positive {
        q = add(q, out, DECOY_SHIFT);
    }
    let mut lig = Vec::new();
    for _ in 0..3 {
        lig.push(TypedAtom::new(Element::C, q, Role::Ligand, AtomFlags::default()));
        let d = random_dir(rng);
        // grow away from the receptor
        let sign = if d[0] * out[0] + d[1] * out[1] + d[2] * out[2] < 0.0 { -1.0 } else { 1.0 };
        q = add(q, d, 1.5 * sign);
    }
    lig
}

/// Smallest ligand–receptor atom distance.
pub fn min_distance(ligand: &[TypedAtom], receptor: &[TypedAtom]) -> f64 {
    ligand
        .iter()
        .flat_map(|a| {
            receptor.iter().map(move |b| {
                let d: f64 = (0..3).map(|k| (a.position[k] - b.position[k]).powi(2)).sum();
                d.sqrt()
            })
        })
        .fold(f64::INFINITY, f64::min)
}

/// `complexes` complexes, alternately positive and negative, each its own
/// target and cluster. Molecules are typed under `scheme`.
pub fn synthetic_dataset(complexes: usize, seed: u64, scheme: AtomTypeScheme) -> (DatasetIndex, MemoryStore) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut store = MemoryStore::new();
    let mut records = Vec::new();
    let rec_elems = [Element::C, Element::N, Element::O];
    for c in 0..complexes {
        let positive = c % 2 == 0;
        // receptor: a short chain of atoms around the origin
        let mut atoms = Vec::new();
        let mut p = [0.0; 3];
        for i in 0..5 {
            let e = rec_elems[rng.random_range(0..rec_elems.len())];
            atoms.push(
                TypedAtom::new(e, p, Role::Receptor, AtomFlags::default()).with_residue(format!("R{}", i / 2)),
            );
            p = add(p, random_dir(&mut rng), 1.5);
        }
        let lig = loop {
            let lig = place_ligand(&mut rng, &atoms, positive);
            let min = min_distance(&lig, &atoms);
            let ok = if positive { min >= MIN_SEPARATION } else { min >= DECOY_SHIFT };
            if ok {
                break lig;
            }
        };
        let rname = format!("rec{c}");
        let lname = format!("lig{c}");
        let (rec, _) = assign_types(&Molecule::new(&rname, Role::Receptor, atoms), scheme);
        let (lig, _) = assign_types(&Molecule::new(&lname, Role::Ligand, lig), scheme);
        store.insert(&rname, rec);
        store.insert(&lname, lig);
        records.push(PoseRecord {
            label: positive as u8,
            rmsd: None,
            target_id: format!("t{c}"),
            cluster_id: format!("c{c}"),
            source: Source::Csar,
            receptor: rname,
            ligand: lname,
            vina_rank: None,
            ligand_id: None,
        });
    }
    (DatasetIndex::new(records).expect("synthetic records are valid"), store)
}
