// Repository exemplar (not the original study's model code): generator for
// "given N integers, print their sum".
// usage: gen <n> <max_abs> <mode> <tag>
//   mode: random | allmax | allmin | alternating
#include "testlib.h"
#include <iostream>
#include <string>
using namespace std;

int main(int argc, char* argv[]) {
    registerGen(argc, argv, 1);
    int n = atoi(argv[1]);
    long long maxAbs = atoll(argv[2]);
    string mode = argv[3];

    cout << n << "\n";
    for (int i = 0; i < n; i++) {
        long long x;
        if (mode == "allmax") x = maxAbs;
        else if (mode == "allmin") x = -maxAbs;
        else if (mode == "alternating") x = (i % 2 == 0) ? maxAbs : -maxAbs;
        else x = rnd.next(-maxAbs, maxAbs);
        cout << x << (i + 1 < n ? " " : "\n");
    }
    return 0;
}
