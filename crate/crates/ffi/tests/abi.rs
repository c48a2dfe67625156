use fblab_ffi::*;
use std::f64::consts::PI;
use std::ptr;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { fblab_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn zeros_through_the_abi() {
    let mut out = [0.0; 3];
    assert_eq!(unsafe { fblab_zeros(0.5, 3, out.as_mut_ptr()) }, FblabStatus::Ok);
    for (i, z) in out.iter().enumerate() {
        assert!((z - (i + 1) as f64 * PI).abs() < 1e-13);
    }
    assert_eq!(unsafe { fblab_zeros(0.5, 3, ptr::null_mut()) }, FblabStatus::NullPointer);
    assert_eq!(unsafe { fblab_zeros(-2.0, 3, out.as_mut_ptr()) }, FblabStatus::Domain);
    assert!(!last_error().is_empty());
}

#[test]
fn system_lifecycle_and_values() {
    let mut sys = ptr::null_mut();
    let cap = fblab_kernel_capacity(0.5);
    assert_eq!(unsafe { fblab_system_new(FblabSetting::Lebesgue, 0.5, cap, &mut sys) }, FblabStatus::Ok);
    let mut v = 0.0;
    assert_eq!(unsafe { fblab_system_eval(sys, 2, 0.3, &mut v) }, FblabStatus::Ok);
    assert!((v - 2f64.sqrt() * (2.0 * PI * 0.3).sin()).abs() < 1e-13);
    assert_eq!(unsafe { fblab_system_eigenvalue(sys, 3, &mut v) }, FblabStatus::Ok);
    assert!((v - 9.0 * PI * PI).abs() < 1e-10);
    assert_eq!(unsafe { fblab_system_eval(sys, 2, 1.5, &mut v) }, FblabStatus::Domain);
    assert_eq!(unsafe { fblab_heat_kernel(sys, FblabKernel::Heat, 1e-5, 0.3, 0.4, &mut v) }, FblabStatus::TimeTooSmall);
    assert_eq!(unsafe { fblab_heat_kernel(sys, FblabKernel::Heat, 0.1, 0.3, 0.4, &mut v) }, FblabStatus::Ok);
    let sine: f64 = (1..200)
        .map(|n| {
            let a = n as f64 * PI;
            2.0 * (-a * a * 0.1).exp() * (a * 0.3).sin() * (a * 0.4).sin()
        })
        .sum();
    assert!((v - sine).abs() < 1e-12);
    unsafe { fblab_system_free(sys) };
    unsafe { fblab_system_free(ptr::null_mut()) };
}

#[test]
fn jacobi_and_unsupported_combinations() {
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { fblab_system_jacobi(-0.5, -0.5, &mut sys) }, FblabStatus::Ok);
    let mut v = 0.0;
    assert_eq!(unsafe { fblab_system_eval(sys, 0, 0.2, &mut v) }, FblabStatus::Ok);
    assert!((v - 1.0).abs() < 1e-14);
    unsafe { fblab_system_free(sys) };
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { fblab_system_new(FblabSetting::Modified, -0.9, 8, &mut sys) }, FblabStatus::Ok);
    unsafe { fblab_system_free(sys) };
    assert_eq!(unsafe { fblab_system_eval(ptr::null(), 1, 0.5, &mut v) }, FblabStatus::NullPointer);
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fblab.h")).unwrap();
    for name in [
        "fblab_zeros",
        "fblab_system_new",
        "fblab_system_free",
        "fblab_heat_kernel",
        "FBLAB_STATUS_OK",
        "typedef struct FblabSystem FblabSystem",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
