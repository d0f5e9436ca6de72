#include "homoeoid/parallel.hpp"

#include <cstdlib>
#include <string>

namespace homoeoid
{
namespace
{
std::atomic<int> g_override{0};

int default_workers()
{
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1)
        hw = 1;
    if (char const* env = std::getenv("HOMOEOID_THREADS"))
    {
        try
        {
            int const cap = std::stoi(env);
            if (cap >= 1)
                return cap;
        }
        catch (std::exception const&)
        {
        }
    }
    return hw;
}
}  // namespace

int worker_count()
{
    int const o = g_override.load();
    if (o > 0)
        return o;
    static int const fallback = default_workers();
    return fallback;
}

void set_worker_count(int workers)
{
    g_override.store(workers > 0 ? workers : 0);
}

}  // namespace homoeoid
