// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace featcrit {

/// Keeps freed tape buffers in the heap instead of returning them to the OS.
/// Every training step allocates and releases megabyte-sized matrices; with
/// glibc defaults each one is a fresh mmap and costs a page fault per 4 KiB.
/// No-op on other allocators.
void tune_allocator();

}  // namespace featcrit
