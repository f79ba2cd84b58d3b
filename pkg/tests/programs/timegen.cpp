// A generator that seeds from the clock: different bytes on every run.
#include <chrono>
#include <cstdio>

int main(int argc, char* argv[]) {
    long long t = std::chrono::steady_clock::now().time_since_epoch().count();
    printf("%lld %lld\n", t % 1000000000LL, (t / 7) % 1000000000LL);
    return 0;
}
