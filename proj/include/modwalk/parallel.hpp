#pragma once

// Thread control for the OpenMP kernels. Every kernel that has a parallel
// path also keeps a serial reference path selected by Exec::serial; the two
// produce bit-identical results because work items never share reductions.

namespace modwalk {

enum class Exec { serial, parallel };

/// 0 restores the OpenMP default.
void set_num_threads(int n);
int num_threads();

}  // namespace modwalk
