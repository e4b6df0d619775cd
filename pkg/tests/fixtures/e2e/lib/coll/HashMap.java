package coll;

public class HashMap {
    public Object put(Object k, Object v) { return null; }
    public Object get(Object k) { return null; }
    public int size() { return 0; }
}
