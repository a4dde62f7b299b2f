use std::fs;
use std::path::PathBuf;

use isect::{read_family, verify, write_family, FamilyFormat, IntersectionLaw};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

fn golden_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(data_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json" || e == "txt"))
        .collect();
    files.sort();
    files
}

#[test]
fn write_of_read_is_identity() {
    let files = golden_files();
    assert!(files.len() >= 10);
    for path in files {
        let bytes = fs::read(&path).unwrap();
        let family = read_family(&bytes).unwrap();
        let format = FamilyFormat::detect(&bytes);
        assert_eq!(write_family(&family, format), bytes, "{}", path.display());
        // The other format round-trips the family itself.
        let other = match format {
            FamilyFormat::Json => FamilyFormat::Text,
            FamilyFormat::Text => FamilyFormat::Json,
        };
        let again = read_family(&write_family(&family, other)).unwrap();
        assert_eq!(again.sets(), family.sets());
        assert_eq!(again.n(), family.n());
    }
}

#[test]
fn golden_verdicts() {
    let cases = [
        ("fano.json", "exact:1", 2, true),
        ("fano.txt", "exact:1", 2, true),
        ("plane_3.txt", "exact:1", 2, true),
        ("sunflower_4_1.txt", "exact:1", 2, true),
        ("curves_3_1.json", "atmost:1", 2, true),
        ("curves_3_1.json", "exact:1", 2, false),
        ("strip_5_2.json", "atmost:1", 2, true),
        ("trim_3_10.txt", "atmost:1", 2, true),
        ("twise_disjoint_9_4_3_1.json", "exact:1", 3, true),
        ("twise_disjoint_9_4_3_1.json", "exact:1", 2, false),
        ("disjoint_pair.json", "exact:1", 2, false),
        ("disjoint_pair.json", "exact:0", 2, true),
        ("empty_family.json", "exact:5", 2, true),
        ("empty_member.txt", "exact:0", 2, true),
        ("repeated_members.json", "exact:2", 2, true),
    ];
    for (file, law, t, valid) in cases {
        let family = read_family(&fs::read(data_dir().join(file)).unwrap()).unwrap();
        let law: IntersectionLaw = law.parse().unwrap();
        let report = verify(&family, &law.with_t(t).unwrap());
        assert_eq!(report.valid, valid, "{file}");
    }
}

#[test]
fn json_and_text_planes_agree() {
    let json = read_family(&fs::read(data_dir().join("fano.json")).unwrap()).unwrap();
    let text = read_family(&fs::read(data_dir().join("fano.txt")).unwrap()).unwrap();
    assert_eq!(json, text);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = "# sunflower\n5\n\n1 5\n2 5\n# petals\n3 5\n4 5\n";
    let golden = fs::read(data_dir().join("sunflower_4_1.txt")).unwrap();
    assert_eq!(read_family(text.as_bytes()).unwrap(), read_family(&golden).unwrap());
}
