#pragma once

namespace vismvs {

/// Caps the worker count for all parallel pixel loops (0 = hardware default).
void set_job_limit(int jobs);
int job_limit();

} // namespace vismvs
