//! Driving the command-line front end from code: the same jobs as
//! `normflow <command> --input ...`, with output written to a temporary
//! directory.

use std::path::Path;

use normflow::cli::main_with_args;

fn main() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/z3_plus_zbar3.json");
    let input = fixture.to_str().expect("utf-8 path");
    let dir = std::env::temp_dir().join(format!("normflow-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");

    let jobs: [(&str, &[&str]); 4] = [
        ("normal_form.json", &["normal-form"]),
        ("flow.csv", &["flow", "--delta", "0,0.5,1", "--format", "csv"]),
        ("radius.csv", &["radius", "--delta", "0,1,2,3", "--format", "csv"]),
        ("check.json", &["check", "--delta", "0.5,2"]),
    ];
    for (file, args) in jobs {
        let out = dir.join(file);
        let mut argv = vec!["normflow"];
        argv.extend_from_slice(args);
        argv.extend(["--input", input, "--output", out.to_str().expect("utf-8 path")]);
        let code = main_with_args(&argv);
        println!("$ {} -> exit {code}", argv.join(" "));
        if let Ok(text) = std::fs::read_to_string(&out) {
            for line in text.lines().take(8) {
                println!("    {line}");
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
}
