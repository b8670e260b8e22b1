use serde_json::Value;
use turkic_web::{convert_json, languages_json, overlap_json};

fn convert(lang: &str, text: &str, policy: &str) -> Value {
    serde_json::from_str(&convert_json(lang, text, policy).unwrap()).unwrap()
}

#[test]
fn lists_ten_languages() {
    let v: Value = serde_json::from_str(&languages_json()).unwrap();
    let codes: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["code"].as_str().unwrap())
        .collect();
    assert_eq!(codes, ["az", "ba", "kk", "ky", "sah", "tt", "tr", "tk", "ug", "uz"]);
    assert_eq!(v[3]["name"], "Kyrgyz");
}

#[test]
fn converts_lines_with_audit() {
    let v = convert("tr", "Merhaba!\nçay", "drop");
    assert_eq!(v["output"], "мэрһаба!\nчай");
    assert_eq!(v["ipa"], "m e r h ɑ b ɑ !\nt͡ʃ ɑ j");

    let v = convert("sakha", "дьон 7", "drop");
    assert_eq!(v["output"], "жон ");
    assert_eq!(v["fallbacks"][0]["kazakh"], "ж");
    assert_eq!(v["dropped"][0]["text"], "7");
    assert_eq!(v["dropped"][0]["reason"], "unknown_char");
}

#[test]
fn reports_bad_arguments() {
    assert!(convert_json("xx", "a", "drop").unwrap_err().contains("xx"));
    assert!(convert_json("tr", "a", "lenient").is_err());
    assert!(convert_json("tr", "ok\n42", "strict")
        .unwrap_err()
        .starts_with("line 2"));
}

#[test]
fn overlap_matrix_shape() {
    let v: Value = serde_json::from_str(&overlap_json()).unwrap();
    assert_eq!(v["languages"].as_array().unwrap().len(), 10);
    assert_eq!(v["counts"][2][1], 40);
}
