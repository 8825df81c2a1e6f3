//! Splits a pose index into cluster-atomic cross-validation folds.
//!
//! cargo run --example cluster_folds

use voxscore::training::{make_folds, parse_index};

const INDEX: &str = "\
1 0.8 1abc kinA CSAR rec/1abc.txt lig/1abc_0.txt 1 L1
0 5.2 1abc kinA CSAR rec/1abc.txt lig/1abc_1.txt 2 L1
1 1.1 2def kinA CSAR rec/2def.txt lig/2def_0.txt 1 L2
- 3.0 2def kinA CSAR rec/2def.txt lig/2def_1.txt 2 L2
1 0.4 3ghi prot DUDE rec/3ghi.txt lig/3ghi_0.txt 1 A1
0 - 3ghi prot DUDE rec/3ghi.txt lig/3ghi_d.txt 1 D1
0 7.7 4jkl nrec CSAR rec/4jkl.txt lig/4jkl_1.txt 3 L4
1 1.9 5mno gpcr CSAR rec/5mno.txt lig/5mno_0.txt 1 L5
";

fn main() {
    let (index, report) = parse_index(INDEX).expect("index parses");
    println!("{} poses kept, {} in the ambiguous RMSD band skipped", report.records, report.omitted);
    let folds = make_folds(&index, 3).expect("enough clusters");
    for f in 0..folds.k() {
        let test: Vec<&str> = folds.records[f].iter().map(|&i| index.records()[i].target_id.as_str()).collect();
        println!("fold {f}: clusters {:?}, test targets {:?}, {} training poses", folds.clusters[f], test, folds.training(f).len());
    }
}
