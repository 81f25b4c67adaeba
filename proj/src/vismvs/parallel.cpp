#include "vismvs/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vismvs {

namespace {
int g_jobs = 0;
}

void set_job_limit(int jobs) {
    g_jobs = jobs < 0 ? 0 : jobs;
#ifdef _OPENMP
    if (g_jobs > 0) omp_set_num_threads(g_jobs);
#endif
}

int job_limit() { return g_jobs; }

} // namespace vismvs
