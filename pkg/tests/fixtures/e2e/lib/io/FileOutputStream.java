package io;

public class FileOutputStream extends OutputStream {
    public FileOutputStream(String name) { }
}
