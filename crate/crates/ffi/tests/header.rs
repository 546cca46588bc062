use std::path::Path;
use std::process::Command;

const FUNCTIONS: [&str; 7] = [
    "ch_machine_load",
    "ch_machine_free",
    "ch_run",
    "ch_run_json",
    "ch_encode_json",
    "ch_last_error",
    "ch_string_free",
];

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/counterheads.h")).unwrap();
    for f in FUNCTIONS {
        assert!(header.contains(&format!("{f}(")), "{f} missing");
    }
    assert!(header.contains("typedef struct ChMachine ChMachine;"));
    assert!(header.contains("CH_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(cc.status.success());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        "#include \"counterheads.h\"\n\
         const char *(*last)(void) = ch_last_error;\n\
         int main(void) { ChRunSummary s = { CH_VERDICT_ACCEPT, 0, 0 }; return (int)s.verdict; }\n",
    )
    .unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
