package org.example.p2;

import java.util.*;
import java.io.IOException;

public class Gen65 extends Base<String> {
    Gen65(int a0, int a1) {
        this.count85 = 0;
    }

    protected List<String> value64;
    private Gen65(int a0) {
    }

}
