//! Compiles a small C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/unrest_ffi.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build.rs");
    for name in ["unrest_normalize_date", "unrest_last_error_message", "unrest_string_free", "UnrestExtractor", "UNREST_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from header");
    }

    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    // A separate target dir keeps this build clear of the lock held by the outer cargo.
    let target = manifest.join("../../target/c-abi");
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "unrest-ffi", "--target-dir"])
        .arg(&target)
        .current_dir(&manifest)
        .status()
        .unwrap();
    assert!(built.success(), "building the static library failed");
    let lib = target.join("debug/libunrest_ffi.a");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "unrest_ffi.h"
int main(void) {
    char *iso = NULL;
    UnrestDirection dir;
    if (unrest_normalize_date("day after tomorrow", "2017-02-10", true, &iso, &dir) != UNREST_STATUS_OK) return 1;
    if (strcmp(iso, "2017-02-12") != 0 || dir != UNREST_DIRECTION_FUTURE) return 2;
    unrest_string_free(iso);
    if (unrest_normalize_date("today", "bad", true, &iso, &dir) != UNREST_STATUS_INVALID_ARGUMENT) return 3;
    char *msg = unrest_last_error_message();
    if (msg == NULL) return 4;
    unrest_string_free(msg);
    UnrestExtractor *ex = NULL;
    if (unrest_extractor_new(2, true, &ex) != UNREST_STATUS_OK) return 5;
    char *json = NULL;
    const char *article = "{\"url\":\"https://x.in/a\",\"body\":\"JPP called on February 16. JPP called for Jharkhand bandh.\",\"published_at\":\"2017-02-10\"}";
    if (unrest_extractor_forecast_json(ex, article, &json) != UNREST_STATUS_OK) return 6;
    if (strstr(json, "2017-02-16") == NULL) return 7;
    unrest_string_free(json);
    unrest_extractor_free(ex);
    puts("ok");
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
