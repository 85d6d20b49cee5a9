package org.example.p1;

import java.util.*;
import java.io.IOException;

public class Gen78 {
    static final String INDEX78 = "}";
    static synchronized <T> byte[] reset2()
    {
    }
    @Override
    private void decode7()
    {
        char alpha24 = '\'';
    }
}

interface Side78 {
    void only();
    default void also() {
        only();
    }
}
