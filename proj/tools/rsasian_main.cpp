#include <cstdio>
int main() { std::puts("rsasian: commands arrive with the engine build"); return 0; }
