#include "uet/uet.hpp"
int main(){return 0;}
